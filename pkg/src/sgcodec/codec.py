"""Top-level container: pick the degree threshold, run the low-degree encoder
on the light part and the block encoder on the heavy part, and assemble a
prefix-free byte container with a full length report.

Container layout (version 1): magic "SGC1", version u8, flags u8, n u32be,
policy id u8 (+f64be parameter where the policy carries one), then the
bit-packed body: light-part sections followed by heavy-part sections.
"""

import math
import struct
from dataclasses import dataclass

from .bitcode import LN2, BitReader, CodeStream
from .errors import MalformedStreamError, SgcError
from .graph import Graph, split, union
from .heavy import heavy_decode, heavy_encode, lemma51_budget, schedule
from .lsfit import ls_heuristic
from .lwc import (
    FLAG_EXACT_MODE,
    FLAG_HEAVY_PART,
    MAGIC,
    VERSION,
    decode_body,
    encode_body,
    lwc_params,
)

_POLICY_FIXED = 0
_POLICY_AN_LOG = 1
_POLICY_AN_POW = 2


@dataclass(frozen=True)
class DeltaPolicy:
    """Threshold policy: a fixed real threshold, or min(log a_n, log log n)
    driven by a named sequence a_n that grows without bound."""

    kind: str  # "fixed" | "an"
    delta: float = 0.0  # fixed threshold
    preset: str = ""  # "log" | "pow"
    param: float = 0.0  # exponent for the pow preset

    def __post_init__(self):
        if self.kind == "fixed":
            if self.delta < 0:
                raise SgcError("fixed threshold must be nonnegative")
        elif self.kind == "an":
            if self.preset == "pow":
                if self.param <= 0:
                    raise SgcError("a_n = n^gamma needs gamma > 0")
            elif self.preset != "log":
                raise SgcError(f"unknown a_n preset {self.preset!r}")
        else:
            raise SgcError(f"unknown policy kind {self.kind!r}")


def parse_policy(text: str) -> DeltaPolicy:
    """Parse 'fixed:<delta>' | 'an:log' | 'an:pow:<gamma>'."""
    parts = text.split(":")
    try:
        if parts[0] == "fixed" and len(parts) == 2:
            return DeltaPolicy(kind="fixed", delta=float(parts[1]))
        if parts[0] == "an" and parts[1] == "log" and len(parts) == 2:
            return DeltaPolicy(kind="an", preset="log")
        if parts[0] == "an" and parts[1] == "pow" and len(parts) == 3:
            return DeltaPolicy(kind="an", preset="pow", param=float(parts[2]))
    except (ValueError, IndexError):
        pass
    raise SgcError(f"cannot parse policy {text!r}")


def policy_text(policy: DeltaPolicy) -> str:
    if policy.kind == "fixed":
        return f"fixed:{policy.delta}"
    if policy.preset == "log":
        return "an:log"
    return f"an:pow:{policy.param}"


def choose_delta(policy: DeltaPolicy, n: int) -> float:
    """Evaluate the policy at size n: fixed value, or
    min(log a_n, log log n) for the sequence presets."""
    if policy.kind == "fixed":
        return policy.delta
    if n < 3:
        raise SgcError("sequence policies need n >= 3 (log log n must be positive)")
    a_n = math.log(n) if policy.preset == "log" else float(n) ** policy.param
    return min(math.log(a_n), math.log(math.log(n)))


@dataclass
class EncodeReport:
    """Sizes, split measurements, and nat accounting for one encode."""

    n: int
    m: int
    m_delta: int
    m_star: int
    r_size: int
    eta: float
    delta: float
    beta: float
    h: int
    degree_bound: float
    lwc_mode: str
    nats_light: float
    nats_heavy: float
    nats_heavy_1: float  # set/count/assignment sections, as measured
    nats_heavy_2: float  # block sections, as measured
    nats_total: float  # container bytes * 8 * ln 2
    overhead_nats: float
    h_b_eta: float
    budget_ell1: float
    budget_ell2: float
    sections: tuple  # ((label, bits), ...)

    def to_dict(self):
        d = dict(self.__dict__)
        d["sections"] = [list(x) for x in self.sections]
        return d


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log(1 - x)


def _pack_header(n: int, flags: int, policy: DeltaPolicy) -> bytes:
    out = bytearray(MAGIC)
    out.append(VERSION)
    out.append(flags)
    out += n.to_bytes(4, "big")
    if policy.kind == "fixed":
        out.append(_POLICY_FIXED)
        out += struct.pack(">d", policy.delta)
    elif policy.preset == "log":
        out.append(_POLICY_AN_LOG)
    else:
        out.append(_POLICY_AN_POW)
        out += struct.pack(">d", policy.param)
    return bytes(out)


def _parse_header(data: bytes):
    if len(data) < 11:
        raise MalformedStreamError("container shorter than header", len(data))
    if data[:4] != MAGIC:
        raise MalformedStreamError("bad container magic", 0)
    if data[4] != VERSION:
        raise MalformedStreamError(f"unsupported container version {data[4]}", 4)
    flags = data[5]
    n = int.from_bytes(data[6:10], "big")
    pid = data[10]
    off = 11
    try:
        if pid == _POLICY_FIXED:
            if len(data) < off + 8:
                raise MalformedStreamError("truncated policy parameter", len(data))
            policy = DeltaPolicy(
                kind="fixed", delta=struct.unpack(">d", data[off : off + 8])[0]
            )
            off += 8
        elif pid == _POLICY_AN_LOG:
            policy = DeltaPolicy(kind="an", preset="log")
        elif pid == _POLICY_AN_POW:
            if len(data) < off + 8:
                raise MalformedStreamError("truncated policy parameter", len(data))
            policy = DeltaPolicy(
                kind="an", preset="pow", param=struct.unpack(">d", data[off : off + 8])[0]
            )
            off += 8
        else:
            raise MalformedStreamError(f"unknown policy id {pid}", 10)
    except MalformedStreamError:
        raise
    except SgcError as e:
        raise MalformedStreamError(f"invalid policy field: {e}", 10) from e
    return n, flags, policy, off


def encode(g: Graph, policy: DeltaPolicy, lwc_mode: str = "auto"):
    """Compress a graph; returns (container bytes, EncodeReport)."""
    n = g.n
    delta = choose_delta(policy, n)
    sr = split(g, delta)
    h, dbound = lwc_params(max(n, 1))

    s = CodeStream()
    mode_used, _info = encode_body(s, sr.light, h, dbound, lwc_mode)
    light_nats = s.nats

    if sr.heavy.m >= 1:
        sched = schedule(sr.heavy.m, n)
        fit = ls_heuristic(g, sched.beta, seed=0)
        beta = sched.beta
    else:
        fit = None
        beta = 1.0
    henc = heavy_encode(g, sr, fit)
    s.extend(henc.stream)

    flags = FLAG_HEAVY_PART | (FLAG_EXACT_MODE if mode_used == "exact" else 0)
    header = _pack_header(n, flags, policy)
    data = header + s.to_bytes()

    ell1, ell2 = lemma51_budget(
        n, len(sr.heavy_set), henc.m_star, henc.beta,
        henc.block_sizes, henc.block_counts,
    )
    total_nats = len(data) * 8 * LN2
    heavy_nats = henc.nats
    report = EncodeReport(
        n=n, m=g.m, m_delta=sr.light.m, m_star=sr.heavy.m,
        r_size=len(sr.heavy_set), eta=sr.eta, delta=delta, beta=beta,
        h=h, degree_bound=dbound, lwc_mode=mode_used,
        nats_light=light_nats, nats_heavy=heavy_nats,
        nats_heavy_1=henc.ell1_measured, nats_heavy_2=henc.ell2_measured,
        nats_total=total_nats,
        overhead_nats=total_nats - light_nats - heavy_nats,
        h_b_eta=_binary_entropy(sr.eta),
        budget_ell1=ell1, budget_ell2=ell2,
        sections=tuple((lab, b) for lab, b in s.sections),
    )
    return data, report


def decode(data: bytes) -> Graph:
    """Exact inverse of encode."""
    n, flags, policy, header_len = _parse_header(data)
    if not flags & FLAG_HEAVY_PART:
        raise MalformedStreamError("not a dual container (heavy flag clear)", 5)
    mode_used = "exact" if flags & FLAG_EXACT_MODE else "surrogate"
    h, dbound = lwc_params(max(n, 1))
    r = BitReader(data, bit_offset=header_len * 8)
    try:
        light = decode_body(r, n, h, dbound, mode_used)
        heavy = heavy_decode(r, n)
        return union(light, heavy)
    except MalformedStreamError:
        raise
    except SgcError as e:
        # corrupt payloads can surface as inconsistent decoded structure
        raise MalformedStreamError(str(e), r.byte_offset) from e


def normalized_rate_lwc(report: EncodeReport) -> float:
    """(total nats - m log n) / n."""
    if report.n < 1:
        raise SgcError("rate needs n >= 1")
    return (report.nats_total - report.m * math.log(report.n)) / report.n


def normalized_rate_graphon(report: EncodeReport, rho: float) -> float:
    """(total nats - mbar log(1/rho)) / mbar with mbar = C(n,2) rho."""
    if not 0 < rho < 1:
        raise SgcError("rho must lie in (0, 1)")
    mbar = report.n * (report.n - 1) / 2 * rho
    if mbar <= 0:
        raise SgcError("nominal edge count is zero")
    return (report.nats_total - mbar * math.log(1 / rho)) / mbar
