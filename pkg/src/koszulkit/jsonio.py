"""JSON encoding of every wire format the CLI speaks.

Integers ride as JSON numbers up to 53 bits and as decimal strings
beyond that; polynomial elements ride as little-endian coefficient
arrays.  Certificates serialize with all their matrices, so an external
tool can re-verify them without this library.
"""

from __future__ import annotations

from typing import Optional

from .complexes import ChainComplex, ChainMap
from .errors import InvalidInputError
from .fgmodules import FgModule
from .k0 import K0KosClass, K0TorsionClass
from .koszul import CanonicalTriple, KappaResult, PresentedKoszul, Resolution
from .matrices import Matrix, SnfCertificate
from .presented import PresentedMap, PresentedModule
from .rings import Ring, ring_from_token

_SAFE_INT = 2 ** 53


def element_to_json(ring: Ring, value):
    if ring.token == "Z":
        return value if -_SAFE_INT < value < _SAFE_INT else str(value)
    return list(value)


def element_from_json(ring: Ring, data):
    if ring.token == "Z":
        if isinstance(data, bool):
            raise InvalidInputError("boolean is not a ring element")
        if isinstance(data, int):
            return data
        if isinstance(data, str):
            try:
                return int(data)
            except ValueError:
                raise InvalidInputError(f"bad integer literal {data!r}") from None
        raise InvalidInputError(f"bad integer entry {data!r}")
    if isinstance(data, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in data):
        return ring.poly(data)
    raise InvalidInputError(f"bad polynomial entry {data!r}")


def matrix_to_json(mat: Matrix) -> dict:
    return {
        "rows": mat.rows,
        "cols": mat.cols,
        "entries": [[element_to_json(mat.ring, x) for x in row] for row in mat.entries],
    }


def matrix_from_json(ring: Ring, data) -> Matrix:
    if not isinstance(data, dict):
        raise InvalidInputError("matrix JSON must be an object")
    try:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = data["entries"]
    except (KeyError, TypeError, ValueError):
        raise InvalidInputError("matrix JSON needs rows, cols, entries") from None
    if not isinstance(entries, list) or len(entries) != rows:
        raise InvalidInputError("matrix JSON has the wrong number of rows")
    parsed = []
    for row in entries:
        if not isinstance(row, list) or len(row) != cols:
            raise InvalidInputError("matrix JSON has a ragged row")
        parsed.append([element_from_json(ring, x) for x in row])
    return Matrix(ring, parsed) if rows else Matrix.zeros(ring, 0, cols)


def complex_to_json(complex_: ChainComplex) -> dict:
    return {
        "ring": complex_.ring.token,
        "ranks": {str(n): r for n, r in sorted(complex_.ranks.items())},
        "differentials": {str(n): matrix_to_json(m) for n, m in sorted(complex_.diffs.items())},
    }


def complex_from_json(data, ring: Optional[Ring] = None) -> ChainComplex:
    if not isinstance(data, dict):
        raise InvalidInputError("complex JSON must be an object")
    if ring is None:
        token = data.get("ring")
        if not isinstance(token, str):
            raise InvalidInputError("complex JSON needs a ring token")
        ring = ring_from_token(token)
    try:
        ranks = {int(n): int(r) for n, r in data.get("ranks", {}).items()}
    except (TypeError, ValueError, AttributeError):
        raise InvalidInputError("bad ranks table") from None
    diffs_data = data.get("differentials", {})
    if not isinstance(diffs_data, dict):
        raise InvalidInputError("bad differentials table")
    diffs = {}
    for n, m in diffs_data.items():
        try:
            degree = int(n)
        except ValueError:
            raise InvalidInputError(f"bad degree key {n!r}") from None
        diffs[degree] = matrix_from_json(ring, m)
    return ChainComplex(ring, ranks, diffs)


def chain_map_to_json(f: ChainMap) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "components": {str(n): matrix_to_json(m) for n, m in sorted(f.components.items())},
    }


def chain_map_from_json(data, ring: Optional[Ring] = None) -> ChainMap:
    if not isinstance(data, dict) or "source" not in data or "target" not in data:
        raise InvalidInputError("chain map JSON needs source and target complexes")
    source = complex_from_json(data["source"], ring)
    target = complex_from_json(data["target"], source.ring if ring is None else ring)
    comps_data = data.get("components", {})
    if not isinstance(comps_data, dict):
        raise InvalidInputError("bad components table")
    comps = {}
    for n, m in comps_data.items():
        try:
            degree = int(n)
        except ValueError:
            raise InvalidInputError(f"bad degree key {n!r}") from None
        comps[degree] = matrix_from_json(source.ring, m)
    return ChainMap(source, target, comps)


def fg_module_to_json(module: FgModule) -> dict:
    return {
        "free_rank": module.free_rank,
        "torsion": [element_to_json(module.ring, t) for t in module.torsion],
    }


def snf_certificate_to_json(cert: SnfCertificate) -> dict:
    ring = cert.D.ring
    return {
        "U": matrix_to_json(cert.U),
        "D": matrix_to_json(cert.D),
        "V": matrix_to_json(cert.V),
        "divisors": [element_to_json(ring, d) for d in cert.divisors],
    }


def torsion_class_to_json(cls: K0TorsionClass) -> dict:
    return {
        "rank": 0,
        "torsion": [{"prime": element_to_json(cls.ring, p), "mult": m} for p, m in cls.counts],
    }


def kos_class_to_json(cls: K0KosClass) -> dict:
    out = torsion_class_to_json(cls.torsion)
    out["rank"] = cls.rank
    return out


def presented_module_to_json(module: PresentedModule) -> dict:
    return {"gens": module.gens, "relations": matrix_to_json(module.relations)}


def presented_map_to_json(f: PresentedMap) -> dict:
    return {
        "source": presented_module_to_json(f.source),
        "target": presented_module_to_json(f.target),
        "matrix": matrix_to_json(f.matrix),
    }


def presented_koszul_to_json(x: PresentedKoszul) -> dict:
    ring = x.top.ring
    return {
        "ring": ring.token,
        "ranks": {"1": x.top.gens, "0": x.bottom.gens},
        "differentials": {"1": matrix_to_json(x.d.matrix)},
        "presentations": {"1": matrix_to_json(x.top.relations), "0": matrix_to_json(x.bottom.relations)},
    }


def presented_koszul_from_json(data, ring: Optional[Ring] = None) -> PresentedKoszul:
    if not isinstance(data, dict):
        raise InvalidInputError("presented complex JSON must be an object")
    if ring is None:
        token = data.get("ring")
        if not isinstance(token, str):
            raise InvalidInputError("presented complex JSON needs a ring token")
        ring = ring_from_token(token)
    try:
        ranks = {int(n): int(r) for n, r in data.get("ranks", {}).items()}
    except (TypeError, ValueError, AttributeError):
        raise InvalidInputError("bad ranks table") from None
    if any(n not in (0, 1) for n in ranks):
        raise InvalidInputError("presented complexes live in degrees 0 and 1")
    g1, g0 = ranks.get(1, 0), ranks.get(0, 0)
    pres = data.get("presentations", {})
    if not isinstance(pres, dict):
        raise InvalidInputError("bad presentations table")
    top_rels = matrix_from_json(ring, pres["1"]) if "1" in pres else Matrix.zeros(ring, g1, 0)
    bot_rels = matrix_from_json(ring, pres["0"]) if "0" in pres else Matrix.zeros(ring, g0, 0)
    top = PresentedModule(ring, g1, top_rels)
    bottom = PresentedModule(ring, g0, bot_rels)
    diffs = data.get("differentials", {})
    boundary = matrix_from_json(ring, diffs["1"]) if "1" in diffs else Matrix.zeros(ring, g0, g1)
    return PresentedKoszul(top, bottom, PresentedMap(top, bottom, boundary))


def kappa_result_to_json(result: KappaResult) -> dict:
    return {
        "retract": complex_to_json(result.kos),
        "u": chain_map_to_json(result.u),
        "v": chain_map_to_json(result.v),
        "u_is_quasi_iso": result.u_is_quasi_iso,
        "v_is_quasi_iso": result.v_is_quasi_iso,
    }


def resolution_to_json(res: Resolution) -> dict:
    return {
        "cover": complex_to_json(res.cover),
        "e1": presented_map_to_json(res.e1),
        "e0": presented_map_to_json(res.e0),
        "kernel": complex_to_json(res.kernel),
        "kernel_inclusion": chain_map_to_json(res.kernel_inclusion),
    }


def triple_to_json(triple: CanonicalTriple) -> dict:
    seq = triple.sequence
    return {
        "left": presented_koszul_to_json(seq.left),
        "middle": presented_koszul_to_json(seq.middle),
        "right": presented_koszul_to_json(seq.right),
        "mono": {"1": matrix_to_json(seq.mono.degree1.matrix), "0": matrix_to_json(seq.mono.degree0.matrix)},
        "epi": {"1": matrix_to_json(seq.epi.degree1.matrix), "0": matrix_to_json(seq.epi.degree0.matrix)},
    }
