"""Dealer service: handlers plus the FastAPI application.

Handlers are plain functions over the pydantic models so the CLI can
call them in-process and the HTTP layer stays a thin binding. Failures
raise ServiceError with a stable machine-readable code; the app maps
those onto HTTP statuses and the CLI maps them onto exit codes.
"""

from __future__ import annotations

import math
import random
import statistics

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from . import __version__
from .access import (
    HierarchyConfig,
    build_config,
    validate_config,
    validate_profile,
    worst_case_unauthorized_sets,
)
from .errors import (
    BindingMismatchError,
    BudgetExceededError,
    FormatError,
    InvalidConfigError,
    IrreducibleExhaustedError,
    NotAuthorizedError,
    OracleConsistencyError,
    PolyshareError,
    SecretTooLargeError,
)
from .fieldpoly import Polynomial, random_poly
from .fileio import (
    bulletin_from_dict,
    bulletin_to_dict,
    config_digest,
    config_from_dict,
    config_to_dict,
    detect_kind,
    loads_document,
    share_from_dict,
    share_to_dict,
)
from .hashing import TEST_FAMILY, hash_family
from .oracle import (
    adversary_view,
    count_preimages,
    enumerate_candidates,
    estimate_condition_iv_rejection,
)
from .scheme import DealResult, PublicBulletin, reconstruct, split
from .schemas import (
    BulletinModel,
    InspectRequest,
    InspectResponse,
    ReconstructRequest,
    ReconstructResponse,
    SelftestResponse,
    SetupRequest,
    SetupResponse,
    ShareModel,
    SplitRequest,
    SplitResponse,
    TranscriptModel,
    VerifyRequest,
    VerifyResponse,
    ViewReport,
)
from .selftest import run_selftest

ENTROPY_ABS_TOL = 1e-12

ERROR_STATUS = {
    "parse-error": 400,
    "unsafe-hash-family": 400,
    "not-authorized": 403,
    "binding-mismatch": 409,
    "budget-exceeded": 413,
    "invalid-config": 422,
    "exhausted": 422,
}


class ServiceError(Exception):
    """A request failure with a stable code and optional detail lines."""

    def __init__(self, code: str, message: str, lines: list[str] | None = None):
        if code not in ERROR_STATUS:
            raise ValueError(f"unknown error code {code!r}")
        self.code = code
        self.lines = lines or []
        super().__init__(message)

    @property
    def status(self) -> int:
        return ERROR_STATUS[self.code]

    def to_detail(self) -> dict:
        return {"code": self.code, "message": str(self), "lines": self.lines}


def _rng(seed: int | None) -> random.Random:
    return random.Random(seed) if seed is not None else random.SystemRandom()


def _load_config(model) -> HierarchyConfig:
    try:
        return config_from_dict(model.model_dump())
    except FormatError as err:
        raise ServiceError("parse-error", str(err)) from err


def _gate_hash_family(cfg, unsafe_flag: bool):
    if cfg.hash_family_id == TEST_FAMILY and not unsafe_flag:
        raise ServiceError(
            "unsafe-hash-family",
            "the test-identity family is invertible and for oracle/debug "
            "use only; pass the explicit unsafe flag to proceed",
        )


# -- handlers ------------------------------------------------------------


def handle_setup(req: SetupRequest) -> SetupResponse:
    profile = validate_profile(req.d0, req.levels, req.thresholds, req.degrees)
    if not profile.ok:
        raise ServiceError(
            "invalid-config",
            "the requested parameters violate the admissibility conditions",
            lines=profile.lines(),
        )
    try:
        cfg = build_config(
            req.p,
            req.d0,
            tuple(req.levels),
            tuple(req.thresholds),
            tuple(req.degrees),
            _rng(req.seed),
            req.hash_family,
        )
    except IrreducibleExhaustedError as err:
        raise ServiceError("exhausted", str(err)) from err
    except (ValueError, PolyshareError) as err:
        raise ServiceError("parse-error", str(err)) from err
    report = validate_config(cfg)
    if not report.ok:
        raise ServiceError(
            "invalid-config",
            "generated config failed validation",
            lines=report.lines(),
        )
    return SetupResponse(
        config=config_to_dict(cfg),
        digest=config_digest(cfg),
        report=report.lines(),
    )


def _deal(cfg, secret_text: str, seed: int | None) -> tuple[DealResult, object]:
    family = hash_family(cfg.hash_family_id, cfg.field)
    try:
        secret = Polynomial.parse(cfg.field, secret_text)
    except ValueError as err:
        raise ServiceError("parse-error", f"bad secret: {err}") from err
    try:
        result = split(secret, cfg, family, _rng(seed))
    except SecretTooLargeError as err:
        raise ServiceError("parse-error", str(err)) from err
    except InvalidConfigError as err:
        raise ServiceError(
            "invalid-config", "config failed validation", lines=err.report.lines()
        ) from err
    return result, family


def handle_split(req: SplitRequest) -> SplitResponse:
    cfg = _load_config(req.config)
    _gate_hash_family(cfg, req.unsafe_test_hash)
    result, _ = _deal(cfg, req.secret, req.seed)
    shares = [
        ShareModel(**share_to_dict(share, cfg)) for share in result.shares
    ]
    bulletin = BulletinModel.model_validate(bulletin_to_dict(result.bulletin))
    transcript = None
    if req.include_transcript:
        t = result.transcript
        transcript = TranscriptModel(
            secret_parts=[q.to_string() for q in t.secret_parts],
            blinders=[q.to_string() for q in t.blinders],
            level_polys=[q.to_string() for q in t.level_polys],
        )
    return SplitResponse(shares=shares, bulletin=bulletin, transcript=transcript)


def handle_reconstruct(req: ReconstructRequest) -> ReconstructResponse:
    try:
        bulletin = bulletin_from_dict(req.bulletin.model_dump())
    except FormatError as err:
        raise ServiceError("parse-error", str(err)) from err
    cfg = bulletin.config
    _gate_hash_family(cfg, req.unsafe_test_hash)
    digest = config_digest(cfg)
    shares = []
    for model in req.shares:
        try:
            shares.append(share_from_dict(model.model_dump(), cfg, digest))
        except BindingMismatchError as err:
            raise ServiceError("binding-mismatch", str(err)) from err
        except FormatError as err:
            raise ServiceError("parse-error", str(err)) from err
    family = hash_family(cfg.hash_family_id, cfg.field)
    try:
        secret = reconstruct(bulletin, family, shares)
    except NotAuthorizedError as err:
        raise ServiceError(
            "not-authorized",
            f"set is not authorized: level {err.level}: have {err.have}, "
            f"need {err.need}",
        ) from err
    except ValueError as err:
        raise ServiceError("parse-error", str(err)) from err
    return ReconstructResponse(secret=secret.to_string())


def _corrupt_bulletin(result: DealResult) -> DealResult:
    entries = sorted(result.bulletin.u)
    if not entries:
        raise ServiceError(
            "parse-error",
            "corruption needs a bulletin with public entries "
            "(single-level hierarchies publish none)",
        )
    key = entries[0]
    u = dict(result.bulletin.u)
    field = result.bulletin.config.field
    u[key] = (u[key] + Polynomial.one(field)) % result.bulletin.config.modulus_of(key[1])
    return DealResult(
        shares=result.shares,
        bulletin=PublicBulletin(config=result.bulletin.config, u=u),
        transcript=result.transcript,
    )


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    cfg = _load_config(req.config)
    _gate_hash_family(cfg, req.unsafe_test_hash)
    report = validate_config(cfg)
    if not report.ok:
        raise ServiceError(
            "invalid-config", "config failed validation", lines=report.lines()
        )
    family = hash_family(cfg.hash_family_id, cfg.field)
    rng = _rng(req.seed)
    try:
        coalitions = worst_case_unauthorized_sets(cfg)
    except BudgetExceededError as err:
        raise ServiceError("budget-exceeded", str(err)) from err

    views = []
    rejections = []
    expected_entropy = cfg.d0 * math.log2(cfg.field.p)
    for _ in range(req.secrets):
        secret = random_poly(cfg.field, cfg.d0, rng)
        result = split(secret, cfg, family, rng)
        if req.corrupt:
            result = _corrupt_bulletin(result)
        for coalition in coalitions:
            crosscheck_ok = True
            try:
                view = adversary_view(result, family, coalition)
            except OracleConsistencyError:
                crosscheck_ok = False
                views.append(
                    ViewReport(
                        coalition=sorted(coalition),
                        theta=0,
                        candidate_count=0,
                        expected_per_secret=0,
                        expected_total=0,
                        per_secret_counts={},
                        empirical_entropy_bits=0.0,
                        expected_entropy_bits=expected_entropy,
                        counts_uniform=False,
                        total_matches=False,
                        entropy_matches=False,
                        honest_member=False,
                        crosscheck_ok=False,
                        witness_rule="single-share-all-levels",
                        ok=False,
                    )
                )
                continue
            try:
                candidates = enumerate_candidates(view)
            except BudgetExceededError as err:
                raise ServiceError("budget-exceeded", str(err)) from err
            counting = count_preimages(
                view, candidates, result.transcript.secret_parts[:-1]
            )
            honest = result.transcript.level_polys[-1] in candidates
            entropy_ok = math.isclose(
                counting.empirical_entropy_bits,
                expected_entropy,
                rel_tol=0,
                abs_tol=ENTROPY_ABS_TOL,
            )
            rejection = None
            if req.condition_iv:
                try:
                    rejection = estimate_condition_iv_rejection(
                        view, candidates, trials=req.trials, rng=rng
                    )
                except BudgetExceededError as err:
                    raise ServiceError("budget-exceeded", str(err)) from err
                rejections.append(rejection)
            ok = (
                counting.counts_uniform
                and counting.total_matches
                and counting.theta >= 0
                and entropy_ok
                and honest
                and crosscheck_ok
            )
            views.append(
                ViewReport(
                    coalition=sorted(coalition),
                    theta=counting.theta,
                    candidate_count=counting.candidate_count,
                    expected_per_secret=counting.expected_per_secret,
                    expected_total=counting.expected_total,
                    per_secret_counts=counting.per_secret_counts,
                    empirical_entropy_bits=counting.empirical_entropy_bits,
                    expected_entropy_bits=expected_entropy,
                    counts_uniform=counting.counts_uniform,
                    total_matches=counting.total_matches,
                    entropy_matches=entropy_ok,
                    honest_member=honest,
                    crosscheck_ok=crosscheck_ok,
                    witness_rule=counting.witness_rule,
                    condition_iv_rejection=rejection,
                    ok=ok,
                )
            )
    return VerifyResponse(
        ok=bool(views) and all(v.ok for v in views),
        config_digest=config_digest(cfg),
        views=views,
        mean_condition_iv_rejection=(
            statistics.mean(rejections) if rejections else None
        ),
    )


def handle_inspect(req: InspectRequest) -> InspectResponse:
    try:
        obj = loads_document(req.document)
        kind = detect_kind(obj)
    except FormatError as err:
        raise ServiceError("parse-error", str(err)) from err
    lines: list[str] = []
    try:
        if kind == "config":
            cfg = config_from_dict(obj)
            lines.append(f"prime p = {cfg.field.p}, secret width d0 = {cfg.d0}")
            lines.append(
                f"{cfg.n} participants in {cfg.num_levels} level(s): "
                f"sizes {list(cfg.level_sizes)}, thresholds {list(cfg.thresholds)}"
            )
            lines.append(f"modulus degrees: {list(cfg.degrees)}")
            lines.append(f"hash family: {cfg.hash_family_id}")
            lines.append(f"digest: {config_digest(cfg)}")
            lines.append("validation: " + "; ".join(validate_config(cfg).lines()))
        elif kind == "share":
            lines.append(f"participant {obj.get('participant')}, level {obj.get('level')}")
            coeffs = str(obj.get("c", "")).split(",")
            lines.append(f"share width: {len(coeffs)} coefficient(s)")
            lines.append(f"bound to config digest: {obj.get('config_digest')}")
        elif kind == "bulletin":
            bulletin = bulletin_from_dict(obj)
            cfg = bulletin.config
            lines.append(f"config digest: {config_digest(cfg)}")
            lines.append(
                f"{cfg.n} participants, {cfg.num_levels} level(s), "
                f"hash family {cfg.hash_family_id}"
            )
            keys = sorted(bulletin.u)
            lines.append(f"{len(keys)} public entries: " + ", ".join(map(str, keys)))
            lines.append("validation: " + "; ".join(validate_config(cfg).lines()))
        else:
            lines.append("verification report")
            for key in ("ok", "config_digest", "mean_condition_iv_rejection"):
                if key in obj:
                    lines.append(f"{key}: {obj[key]}")
            if "views" in obj:
                lines.append(f"views: {len(obj['views'])}")
    except FormatError as err:
        raise ServiceError("parse-error", str(err)) from err
    return InspectResponse(kind=kind, lines=lines)


def handle_selftest() -> SelftestResponse:
    return run_selftest()


# -- FastAPI wiring --------------------------------------------------------


def create_app() -> FastAPI:
    app = FastAPI(
        title="polyshare dealer service",
        version=__version__,
        description=(
            "Hierarchical threshold secret sharing over polynomial rings: "
            "deal, reconstruct, inspect, and verify."
        ),
    )

    @app.exception_handler(ServiceError)
    async def service_error_handler(_, err: ServiceError):
        return JSONResponse(status_code=err.status, content={"detail": err.to_detail()})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/setup", response_model=SetupResponse)
    def setup(req: SetupRequest):
        return handle_setup(req)

    @app.post("/split", response_model=SplitResponse)
    def split_endpoint(req: SplitRequest):
        return handle_split(req)

    @app.post("/reconstruct", response_model=ReconstructResponse)
    def reconstruct_endpoint(req: ReconstructRequest):
        return handle_reconstruct(req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        return handle_verify(req)

    @app.post("/inspect", response_model=InspectResponse)
    def inspect(req: InspectRequest):
        return handle_inspect(req)

    @app.post("/selftest", response_model=SelftestResponse)
    def selftest():
        return handle_selftest()

    return app


app = create_app()
