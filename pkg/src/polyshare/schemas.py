"""Pydantic request/response models for the dealer service.

ConfigModel, ShareModel and BulletinModel mirror the on-disk JSON
formats field for field, so a file's parsed content validates directly
against the model and a model dump serializes back bit-exactly.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class ConfigModel(BaseModel):
    p: int
    d0: int
    levels: list[int]
    thresholds: list[int]
    moduli: list[str]
    hash_family: str = "std-v1"


class ShareModel(BaseModel):
    participant: int
    level: int
    c: str
    config_digest: str


class BulletinEntryModel(BaseModel):
    level: int
    participant: int
    value: str


class BulletinModel(BaseModel):
    config: ConfigModel
    hash_family: str
    u: list[BulletinEntryModel]


class TranscriptModel(BaseModel):
    secret_parts: list[str]
    blinders: list[str]
    level_polys: list[str]


class SetupRequest(BaseModel):
    p: int
    d0: int
    levels: list[int]
    thresholds: list[int]
    degrees: list[int]
    hash_family: str = "std-v1"
    seed: int | None = None


class SetupResponse(BaseModel):
    config: ConfigModel
    digest: str
    report: list[str]


class SplitRequest(BaseModel):
    config: ConfigModel
    secret: str
    seed: int | None = None
    unsafe_test_hash: bool = False
    include_transcript: bool = False


class SplitResponse(BaseModel):
    shares: list[ShareModel]
    bulletin: BulletinModel
    transcript: TranscriptModel | None = None


class ReconstructRequest(BaseModel):
    bulletin: BulletinModel
    shares: list[ShareModel]
    unsafe_test_hash: bool = False


class ReconstructResponse(BaseModel):
    secret: str


class VerifyRequest(BaseModel):
    config: ConfigModel
    secrets: int = Field(default=3, ge=1)
    trials: int = Field(default=200, ge=100)
    condition_iv: bool = False
    corrupt: bool = False
    seed: int | None = None
    unsafe_test_hash: bool = False


class ViewReport(BaseModel):
    coalition: list[int]
    theta: int
    candidate_count: int
    expected_per_secret: int
    expected_total: int
    per_secret_counts: dict[str, int]
    empirical_entropy_bits: float
    expected_entropy_bits: float
    counts_uniform: bool
    total_matches: bool
    entropy_matches: bool
    honest_member: bool
    crosscheck_ok: bool
    witness_rule: str
    condition_iv_rejection: float | None = None
    ok: bool


class VerifyResponse(BaseModel):
    ok: bool
    config_digest: str
    views: list[ViewReport]
    mean_condition_iv_rejection: float | None = None


class InspectRequest(BaseModel):
    document: str


class InspectResponse(BaseModel):
    kind: str
    lines: list[str]


class SelftestCheck(BaseModel):
    name: str
    ok: bool
    detail: str = ""


class SelftestResponse(BaseModel):
    ok: bool
    checks: list[SelftestCheck]
