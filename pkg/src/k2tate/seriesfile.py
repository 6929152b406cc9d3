"""Line-oriented text format for series over unramified rings.

::

    # comments start with '#'
    p 11
    nu 4
    d 6
    modulus 1 0 5187 0 9453 0 1
    prec 20
    1 3 0 0 0 0 0
    2 0 1 0 0 0 0

The header names ``p``, ``nu``, the degree ``d`` and the monic modulus (low
degree first, ``d + 1`` integers); ``prec`` is the series precision.  Each
record is an exponent followed by its ``d`` coordinates in the power basis.
Exponents not listed have coefficient zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import UnramifiedRing
from .series import LaurentSeries

HEADER_KEYS = ("p", "nu", "d", "modulus", "prec")


class SeriesFormatError(ValueError):
    pass


@dataclass
class SeriesFile:
    p: int
    nu: int
    d: int
    modulus: tuple[int, ...]
    prec: int
    records: dict[int, tuple[int, ...]]


def parse(text: str) -> SeriesFile:
    header: dict[str, list[int]] = {}
    records: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] in HEADER_KEYS:
                if parts[0] in header:
                    raise SeriesFormatError(f"line {lineno}: duplicate header {parts[0]}")
                header[parts[0]] = [int(x) for x in parts[1:]]
                continue
            nums = [int(x) for x in parts]
        except ValueError as exc:
            raise SeriesFormatError(f"line {lineno}: {exc}") from None
        if nums[0] in records:
            raise SeriesFormatError(f"line {lineno}: exponent {nums[0]} repeated")
        records[nums[0]] = tuple(nums[1:])
    missing = [k for k in HEADER_KEYS if k not in header]
    if missing:
        raise SeriesFormatError(f"missing header fields: {', '.join(missing)}")
    for k in ("p", "nu", "d", "prec"):
        if len(header[k]) != 1:
            raise SeriesFormatError(f"header {k} takes one integer")
    d = header["d"][0]
    modulus = tuple(header["modulus"])
    if len(modulus) != d + 1 or modulus[-1] != 1:
        raise SeriesFormatError("modulus must be monic with d + 1 coefficients")
    prec = header["prec"][0]
    for k, v in records.items():
        if len(v) != d:
            raise SeriesFormatError(f"exponent {k}: expected {d} coordinates, got {len(v)}")
        if k >= prec:
            raise SeriesFormatError(f"exponent {k} is not below prec {prec}")
    return SeriesFile(header["p"][0], header["nu"][0], d, modulus, prec, records)


def to_series(sf: SeriesFile, ring: UnramifiedRing) -> LaurentSeries:
    if (ring.p, ring.nu, ring.degree) != (sf.p, sf.nu, sf.d):
        raise SeriesFormatError("file header does not match the coefficient ring")
    if tuple(x % ring._mod for x in sf.modulus) != tuple(ring.modulus):
        raise SeriesFormatError(
            f"file modulus {sf.modulus} differs from the ring modulus {tuple(ring.modulus)}")
    lo = min(list(sf.records) + [0])
    coeffs = [tuple(x % ring._mod for x in sf.records.get(k, (0,) * sf.d))
              for k in range(lo, sf.prec)]
    return LaurentSeries(ring, coeffs, lo, sf.prec)


def dumps(f: LaurentSeries) -> str:
    R = f.ring
    if not isinstance(R, UnramifiedRing):
        raise TypeError("series files hold series over unramified rings")
    lines = [f"p {R.p}", f"nu {R.nu}", f"d {R.degree}",
             "modulus " + " ".join(str(x) for x in R.modulus), f"prec {f.prec}"]
    for k, c in f.items():
        lines.append(f"{k} " + " ".join(str(x) for x in c))
    return "\n".join(lines) + "\n"
