"""ASCII line codec for agent states, as written to a radio in transparent mode.

Frame layout::

    SWRM1,<id>,<tick>,<x>,<y>,<hx>,<hy>,<speed>,<tfx|->,<tfy|->,<flags>*<cs>\\n

``<cs>`` is the XOR of every byte between ``SWRM1,`` and ``*`` as two
lowercase hex digits.  Floats use Python's shortest round-trip ``repr``.
"""

from __future__ import annotations

import re

from .core import DEGRADED, LEADER, AgentState, Heading, SwarmError, Vec2

PREFIX = b"SWRM1,"
N_FIELDS = 10
_FLAG_BITS = {LEADER: 1, DEGRADED: 2}
_INT = re.compile(rb"(?:0|[1-9][0-9]*)\Z")
_HEX = re.compile(rb"[0-9a-f]{2}\Z")


class FrameError(SwarmError, ValueError):
    """Base for frames the network layer must drop."""


class BadFrame(FrameError):
    """Missing sentinel, wrong field count or unparsable field."""


class BadChecksum(FrameError):
    """Checksum does not match the payload."""


def checksum(body: bytes) -> int:
    cs = 0
    for b in body:
        cs ^= b
    return cs


def _f(x: float) -> str:
    return repr(float(x))


def encode(state: AgentState) -> bytes:
    flags = 0
    for name in state.role_flags:
        flags |= _FLAG_BITS[name]
    if state.target_found is None:
        tfx = tfy = "-"
    else:
        tfx, tfy = _f(state.target_found.x), _f(state.target_found.y)
    body = ",".join((
        str(state.id), str(state.tick),
        _f(state.position.x), _f(state.position.y),
        _f(state.heading.x), _f(state.heading.y),
        _f(state.speed), tfx, tfy, str(flags),
    )).encode("ascii")
    return PREFIX + body + b"*" + b"%02x" % checksum(body) + b"\n"


def _float(tok: bytes) -> float:
    try:
        return float(tok.decode("ascii"))
    except (ValueError, UnicodeDecodeError):
        raise BadFrame(f"bad number {tok!r}") from None


def decode(frame: bytes) -> AgentState:
    frame = bytes(frame)
    if not frame.startswith(PREFIX):
        raise BadFrame("missing SWRM1 sentinel")
    if not frame.endswith(b"\n") or frame.count(b"\n") != 1 or b"\r" in frame:
        raise BadFrame("frame must end with a single newline")
    if frame.count(b"*") != 1:
        raise BadFrame("frame must contain exactly one '*'")
    body, tail = frame[len(PREFIX):-1].split(b"*")
    if not _HEX.match(tail):
        raise BadFrame(f"malformed checksum {tail!r}")
    if any(b > 0x7E or b < 0x20 for b in body):
        raise BadFrame("non-printable byte in payload")
    if int(tail, 16) != checksum(body):
        raise BadChecksum(f"checksum {tail.decode()} != {checksum(body):02x}")
    fields = body.split(b",")
    if len(fields) != N_FIELDS:
        raise BadFrame(f"expected {N_FIELDS} fields, got {len(fields)}")
    sid, tick, x, y, hx, hy, speed, tfx, tfy, flags = fields
    for tok in (sid, tick, flags):
        if not _INT.match(tok):
            raise BadFrame(f"bad integer {tok!r}")
    flag_bits = int(flags)
    if flag_bits & ~0b11:
        raise BadFrame(f"unknown flag bits {flag_bits}")
    if (tfx == b"-") != (tfy == b"-"):
        raise BadFrame("target must be fully present or absent")
    try:
        target = None if tfx == b"-" else Vec2(_float(tfx), _float(tfy))
        return AgentState(
            id=int(sid),
            tick=int(tick),
            position=Vec2(_float(x), _float(y)),
            heading=Heading(_float(hx), _float(hy)),
            speed=_float(speed),
            target_found=target,
            role_flags=frozenset(k for k, bit in _FLAG_BITS.items() if flag_bits & bit),
        )
    except BadFrame:
        raise
    except ValueError as exc:
        raise BadFrame(str(exc)) from None
