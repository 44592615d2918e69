"""Command-line interface.

Every command is a thin client of the dealer service: it parses
arguments and files into the service request models, invokes the
handlers (in-process by default, over HTTP when --server is given),
and writes the responses back to disk or stdout. No domain logic
lives here.

Exit codes: 0 ok; 1 admissibility/counting identity failure; 2 set not
authorized; 3 share/bulletin binding mismatch; 4 parse or input
validation error (including usage errors); 5 enumeration budget
exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from pydantic import BaseModel, ValidationError

from . import __version__
from .schemas import (
    InspectRequest,
    InspectResponse,
    ReconstructRequest,
    ReconstructResponse,
    SelftestResponse,
    SetupRequest,
    SetupResponse,
    SplitRequest,
    SplitResponse,
    VerifyRequest,
    VerifyResponse,
)
from .service import (
    ServiceError,
    handle_inspect,
    handle_reconstruct,
    handle_selftest,
    handle_setup,
    handle_split,
    handle_verify,
)

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_NOT_AUTHORIZED = 2
EXIT_BINDING = 3
EXIT_PARSE = 4
EXIT_BUDGET = 5

EXIT_BY_CODE = {
    "parse-error": EXIT_PARSE,
    "unsafe-hash-family": EXIT_PARSE,
    "not-authorized": EXIT_NOT_AUTHORIZED,
    "binding-mismatch": EXIT_BINDING,
    "budget-exceeded": EXIT_BUDGET,
    "invalid-config": EXIT_IDENTITY,
    "exhausted": EXIT_IDENTITY,
}


class _Parser(argparse.ArgumentParser):
    # usage problems land in the parse-error exit bucket; argparse's
    # default of 2 would collide with the not-authorized code
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


class Client:
    """Dispatches requests to in-process handlers or a remote server."""

    def __init__(self, server: str | None = None):
        self.server = server

    def call(self, op: str, request: BaseModel | None, response_type):
        if self.server is None:
            if op == "selftest":
                return handle_selftest()
            handler = {
                "setup": handle_setup,
                "split": handle_split,
                "reconstruct": handle_reconstruct,
                "verify": handle_verify,
                "inspect": handle_inspect,
            }[op]
            return handler(request)
        import httpx

        url = self.server.rstrip("/") + "/" + op
        payload = request.model_dump() if request is not None else None
        resp = httpx.post(url, json=payload, timeout=600.0)
        if resp.status_code >= 400:
            detail = {}
            try:
                detail = resp.json().get("detail", {})
            except ValueError:
                pass
            if not isinstance(detail, dict):
                detail = {"message": str(detail)}
            code = detail.get("code", "parse-error")
            if code not in EXIT_BY_CODE:
                code = "parse-error"
            raise ServiceError(
                code,
                detail.get("message", f"server returned {resp.status_code}"),
                detail.get("lines"),
            )
        return response_type.model_validate(resp.json())


def _dumps(obj: dict) -> str:
    from .fileio import dumps_document

    return dumps_document(obj)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise ServiceError("parse-error", f"cannot read {path}: {err}") from err


def _load_model(path: str, model_type):
    from .fileio import loads_document

    obj = loads_document(_read_text(path))
    try:
        return model_type.model_validate(obj)
    except ValidationError as err:
        first = err.errors()[0]
        loc = ".".join(str(x) for x in first.get("loc", ()))
        raise ServiceError(
            "parse-error", f"{path}: {loc}: {first.get('msg', 'invalid')}"
        ) from err


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="polyshare",
        description="Hierarchical threshold secret sharing over polynomial rings.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_server(p):
        p.add_argument(
            "--server",
            metavar="URL",
            help="send the request to a running dealer service instead of "
            "computing in-process",
        )

    p = sub.add_parser("setup", help="generate a hierarchy config with fresh moduli")
    p.add_argument("--p", type=int, required=True, help="prime field size")
    p.add_argument("--d0", type=int, required=True, help="secret coefficient count")
    p.add_argument("--levels", type=_int_list, required=True, metavar="N1,N2,...")
    p.add_argument("--thresholds", type=_int_list, required=True, metavar="T1,T2,...")
    p.add_argument(
        "--degrees", type=_int_list, required=True, metavar="D1,D2,...",
        help="modulus degree per participant, nondecreasing",
    )
    p.add_argument("--out", required=True, help="config file to write")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--hash-family", default="std-v1")
    p.add_argument("--unsafe-test-hash", action="store_true")
    add_server(p)

    p = sub.add_parser("split", help="deal a secret into share files and a bulletin")
    p.add_argument("--config", required=True, help="config file")
    p.add_argument("--secret", required=True, help="secret polynomial, e.g. '1,0,1'")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--hash-family", default=None, help="override the config's family")
    p.add_argument("--unsafe-test-hash", action="store_true")
    p.add_argument("--debug-transcript", action="store_true",
                   help="also write the dealer transcript (debug only)")
    add_server(p)

    p = sub.add_parser("reconstruct", help="recover the secret from share files")
    p.add_argument("--bulletin", required=True)
    p.add_argument("shares", nargs="+", metavar="SHARE")
    p.add_argument("--unsafe-test-hash", action="store_true")
    add_server(p)

    p = sub.add_parser("verify", help="run the exhaustive counting checks")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--condition-iv", action="store_true",
                   help="also measure the hash-consistency rejection fraction")
    p.add_argument("--corrupt", action="store_true",
                   help="negative control: corrupt one public entry first")
    p.add_argument("--secrets", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--unsafe-test-hash", action="store_true")
    add_server(p)

    p = sub.add_parser("inspect", help="print a parsed summary of any artifact file")
    p.add_argument("path", metavar="PATH")
    add_server(p)

    p = sub.add_parser("selftest", help="run the built-in sanity suite")
    add_server(p)

    p = sub.add_parser("serve", help="run the dealer service over HTTP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


# -- commands --------------------------------------------------------------


def cmd_setup(args) -> int:
    client = Client(args.server)
    req = SetupRequest(
        p=args.p,
        d0=args.d0,
        levels=args.levels,
        thresholds=args.thresholds,
        degrees=args.degrees,
        hash_family=args.hash_family,
        seed=args.seed,
    )
    if args.hash_family == "test-identity" and not args.unsafe_test_hash:
        raise ServiceError(
            "unsafe-hash-family",
            "test-identity requires --unsafe-test-hash",
        )
    resp = client.call("setup", req, SetupResponse)
    Path(args.out).write_text(_dumps(resp.config.model_dump()))
    for line in resp.report:
        print(line)
    print(f"wrote {args.out} (digest {resp.digest})")
    return EXIT_OK


def cmd_split(args) -> int:
    client = Client(args.server)
    from .fileio import loads_document

    config_obj = loads_document(_read_text(args.config))
    if args.hash_family is not None:
        config_obj["hash_family"] = args.hash_family
    req = SplitRequest(
        config=config_obj,
        secret=args.secret,
        seed=args.seed,
        unsafe_test_hash=args.unsafe_test_hash,
        include_transcript=args.debug_transcript,
    )
    resp = client.call("split", req, SplitResponse)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for share in resp.shares:
        path = out_dir / f"share-{share.participant}.json"
        path.write_text(_dumps(share.model_dump()))
    (out_dir / "bulletin.json").write_text(_dumps(resp.bulletin.model_dump()))
    written = len(resp.shares) + 1
    if resp.transcript is not None:
        (out_dir / "transcript.json").write_text(_dumps(resp.transcript.model_dump()))
        written += 1
    print(f"wrote {written} files to {out_dir}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    client = Client(args.server)
    from .schemas import BulletinModel, ShareModel

    req = ReconstructRequest(
        bulletin=_load_model(args.bulletin, BulletinModel),
        shares=[_load_model(path, ShareModel) for path in args.shares],
        unsafe_test_hash=args.unsafe_test_hash,
    )
    resp = client.call("reconstruct", req, ReconstructResponse)
    print(resp.secret)
    return EXIT_OK


def cmd_verify(args) -> int:
    client = Client(args.server)
    from .fileio import loads_document

    req = VerifyRequest(
        config=loads_document(_read_text(args.config)),
        secrets=args.secrets,
        trials=args.trials,
        condition_iv=args.condition_iv,
        corrupt=args.corrupt,
        seed=args.seed,
        unsafe_test_hash=args.unsafe_test_hash,
    )
    resp = client.call("verify", req, VerifyResponse)
    print(_dumps(resp.model_dump(exclude_none=True)), end="")
    return EXIT_OK if resp.ok else EXIT_IDENTITY


def cmd_inspect(args) -> int:
    client = Client(args.server)
    req = InspectRequest(document=_read_text(args.path))
    resp = client.call("inspect", req, InspectResponse)
    print(f"kind: {resp.kind}")
    for line in resp.lines:
        print(f"  {line}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    client = Client(args.server)
    resp = client.call("selftest", None, SelftestResponse)
    for check in resp.checks:
        status = "ok" if check.ok else "FAIL"
        detail = f" - {check.detail}" if check.detail else ""
        print(f"[{status}] {check.name}{detail}")
    return EXIT_OK if resp.ok else EXIT_IDENTITY


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "setup": cmd_setup,
    "split": cmd_split,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "inspect": cmd_inspect,
    "selftest": cmd_selftest,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    from .errors import FormatError

    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ServiceError as err:
        print(f"error ({err.code}): {err}", file=sys.stderr)
        for line in err.lines:
            print(f"  {line}", file=sys.stderr)
        return EXIT_BY_CODE[err.code]
    except FormatError as err:
        print(f"error (parse-error): {err}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as err:
        print(f"error (parse-error): {err}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
