"""Newform data, trace comparison and elimination of exponents.

A newform g with coefficient field K_g = Q[x]/(h) is compared with the
Frey Jacobian at auxiliary primes q.  For each prime Q of K above q,

    T(g, Q) = N(Q) * N(a_Q(g)^2 - (N(Q) + 1)^2) * prod_{u,v} Nm(a_Q(g), trace(u, v, w)),

where (u, v) runs over (F_q^x)^2 standing for (a^p, b^p) mod q, w over the
fifth roots of u + v in F_q (c mod q), and Nm is the norm from the compositum
of K and K_g of prod_sigma (a_Q(g) - sigma(a)).  An exponent p survives only
if it divides gcd_Q T(g, Q).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from sympy import factorint

from .frey import MINUS, PLUS, frey_rhs
from .frobenius import FrobeniusTrace, RMFactorizationError, trace_of_prime_field_curve
from .numfield import Q2, Q5, PrimeIdealK, factor_rational_prime, prime_from_label
from .poly import Poly, resultant
from .selmer import quadratic_residue_symbol, selmer_group

CACHE_ENV = "FREYHYPER_CACHE"


class NewformSchemaError(ValueError):
    """A newform record violates the file format."""


class LevelMismatchError(ValueError):
    """A record's level differs from the requested level."""


class EndpointError(OSError):
    """The remote newform source could not be read."""


class DeligneBoundError(ValueError):
    """An eigenvalue has a real embedding larger than 2 sqrt(N(q))."""


# ---------------------------------------------------------------------------
# levels

def level_from_json(entries) -> dict:
    """[[q, f, e, exp(, index)], ...] to {prime label: exponent}."""
    if not isinstance(entries, list):
        raise NewformSchemaError("field 'level' must be a list")
    out = {}
    for ent in entries:
        if not isinstance(ent, list) or len(ent) not in (4, 5) or \
                not all(isinstance(v, int) for v in ent):
            raise NewformSchemaError(f"field 'level': bad entry {ent!r}")
        q, f, e, k = ent[:4]
        idx = ent[4] if len(ent) == 5 else 1
        try:
            primes = factor_rational_prime(q)
        except ValueError as exc:
            raise NewformSchemaError(f"field 'level': {exc}") from None
        if not 1 <= idx <= len(primes):
            raise NewformSchemaError(f"field 'level': no prime {idx} above {q}")
        P = primes[idx - 1]
        if (P.residue_degree, P.ramification_index) != (f, e):
            raise NewformSchemaError(f"field 'level': ({q}, {f}, {e}) is not a prime of K")
        if k > 0:
            out[P.label] = out.get(P.label, 0) + k
    return out


def level_to_json(level: dict) -> list:
    out = []
    for lab, k in sorted(level.items()):
        P = prime_from_label(lab)
        ent = [P.residue_char, P.residue_degree, P.ramification_index, k]
        if P.splitting == "split":
            ent.append(P.index)
        out.append(ent)
    return out


def level_str(level: dict) -> str:
    if not level:
        return "(1)"
    return " * ".join(f"({lab})^{k}" if k > 1 else f"({lab})" for lab, k in sorted(level.items()))


def _as_level(level) -> dict:
    if level is None:
        return {}
    if isinstance(level, dict):
        out = {}
        for k, v in level.items():
            lab = k.label if isinstance(k, PrimeIdealK) else str(k)
            if v:
                out[lab] = v
        return out
    return level_from_json(level)


# ---------------------------------------------------------------------------
# coefficient fields

class CoefficientField:
    """Q[x]/(h) for a monic irreducible integer polynomial h."""

    def __init__(self, poly: Sequence[int]):
        h = Poly([Fraction(c) for c in poly])
        if h.degree < 1 or h.lc != 1:
            raise NewformSchemaError("field 'field_poly' must be monic of degree >= 1")
        self.poly = tuple(int(c) for c in poly)
        self.h = h
        self.degree = h.degree

    def element(self, coords: Sequence) -> Poly:
        if len(coords) > self.degree:
            raise NewformSchemaError("eigenvalue has more coordinates than the field degree")
        return Poly([Fraction(c) for c in coords]) % self.h

    def norm(self, b: Poly) -> Fraction:
        """N_{K_g/Q}(b) = Res(h, b) for monic h."""
        b = b % self.h
        if b.is_zero():
            return Fraction(0)
        return Fraction(resultant(self.h, b))

    @property
    def contains_sqrt5(self) -> bool:
        return _contains_sqrt5(self.poly)

    def real_embeddings(self, b: Poly, dps: int = 40) -> list:
        import mpmath
        mpmath.mp.dps = dps
        roots = mpmath.polyroots(list(reversed(self.poly)), maxsteps=200, extraprec=2 * dps)
        out = []
        for r in roots:
            val = mpmath.mpf(0)
            for c in reversed(b.coeffs):
                val = val * r + mpmath.mpf(c.numerator) / c.denominator
            out.append(val)
        return out


@lru_cache(maxsize=None)
def _contains_sqrt5(poly: tuple) -> bool:
    """sqrt5 lies in Q[x]/(h) iff h factors over Q(sqrt5) (h irreducible over Q)."""
    import sympy
    x = sympy.Symbol("x")
    expr = sum(c * x ** i for i, c in enumerate(poly))
    _, facs = sympy.factor_list(expr, x)
    if len(facs) != 1 or facs[0][1] != 1:
        raise NewformSchemaError("field 'field_poly' must be irreducible over Q")
    _, facs5 = sympy.factor_list(expr, x, extension=sympy.sqrt(5))
    return len(facs5) > 1


# ---------------------------------------------------------------------------
# newform records

@dataclass(frozen=True)
class NewformRecord:
    label: str
    level: dict
    field_poly: tuple
    eigs: dict                      # prime label -> tuple of Fractions
    cm: Optional[bool] = None
    weight: int = 2

    @property
    def field(self) -> CoefficientField:
        return CoefficientField(self.field_poly)

    def eigenvalue(self, P: PrimeIdealK) -> Poly:
        if P.label not in self.eigs:
            raise KeyError(f"form {self.label} has no eigenvalue at {P.label}")
        return self.field.element(self.eigs[P.label])

    def to_json(self) -> dict:
        d = {"label": self.label, "level": level_to_json(self.level),
             "field_poly": list(self.field_poly),
             "eigs": {k: [str(c) for c in v] for k, v in sorted(self.eigs.items())}}
        if self.cm is not None:
            d["cm"] = self.cm
        return d


def _parse_rational(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise NewformSchemaError(f"field '{where}': boolean is not a rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            pass
    raise NewformSchemaError(f"field '{where}': {v!r} is not an exact rational")


def record_from_json(obj: dict) -> NewformRecord:
    if not isinstance(obj, dict):
        raise NewformSchemaError("record must be a JSON object")
    for key in ("label", "level", "field_poly", "eigs"):
        if key not in obj:
            raise NewformSchemaError(f"missing field '{key}'")
    label = obj["label"]
    if not isinstance(label, str):
        raise NewformSchemaError("field 'label' must be a string")
    level = level_from_json(obj["level"])
    fp = obj["field_poly"]
    if not isinstance(fp, list) or not fp or not all(isinstance(c, int) and not isinstance(c, bool)
                                                     for c in fp):
        raise NewformSchemaError("field 'field_poly' must be a list of integers")
    F = CoefficientField(fp)
    eigs_in = obj["eigs"]
    if not isinstance(eigs_in, dict):
        raise NewformSchemaError("field 'eigs' must be an object")
    eigs = {}
    for k, v in eigs_in.items():
        try:
            P = prime_from_label(k)
        except (ValueError, IndexError):
            raise NewformSchemaError(f"field 'eigs': bad prime label {k!r}") from None
        if not isinstance(v, list) or len(v) > F.degree:
            raise NewformSchemaError(f"field 'eigs.{k}' must list at most {F.degree} rationals")
        eigs[P.label] = tuple(_parse_rational(c, f"eigs.{k}") for c in v)
    cm = obj.get("cm")
    if cm is not None and not isinstance(cm, bool):
        raise NewformSchemaError("field 'cm' must be a boolean")
    weight = obj.get("weight", 2)
    if weight != 2:
        raise NewformSchemaError("field 'weight': only parallel weight 2 is supported")
    return NewformRecord(label, level, tuple(fp), eigs, cm)


def check_deligne(rec: NewformRecord, slack: float = 1e-6) -> None:
    F = rec.field
    for lab, coords in rec.eigs.items():
        P = prime_from_label(lab)
        bound = 2 * math.sqrt(P.norm) + slack
        for val in F.real_embeddings(F.element(coords)):
            if abs(complex(val)) > bound:
                raise DeligneBoundError(
                    f"form {rec.label}: eigenvalue at {lab} has an embedding of size "
                    f"{float(abs(complex(val))):.6f} > 2 sqrt({P.norm})")


@dataclass(frozen=True)
class NewformSpace:
    level: dict
    forms: tuple
    dimension: Optional[int]        # asserted dimension, if the source states it
    source_hash: str

    @property
    def asserted_empty(self) -> bool:
        return self.dimension == 0 and not self.forms


# ---------------------------------------------------------------------------
# sources

def cache_dir() -> Path:
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else Path.home() / ".cache" / "freyhyper"


def bundled_spaces_text() -> str:
    return resources.files("freyhyper").joinpath("data/newform_spaces.jsonl").read_text()


def _fetch(url: str, timeout: float = 30.0) -> str:
    key = hashlib.sha256(url.encode()).hexdigest()
    cdir = cache_dir()
    cpath = cdir / f"{key}.jsonl"
    if cpath.exists():
        return cpath.read_text()
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            text = resp.read().decode()
    except (urllib.error.URLError, OSError) as exc:
        raise EndpointError(f"cannot read {url}: {exc}") from None
    cdir.mkdir(parents=True, exist_ok=True)
    cpath.write_text(text)
    return text


def read_source(source) -> str:
    """Text of a JSON-lines source: a path, an http(s) URL, or 'bundled'."""
    s = str(source)
    if s == "bundled":
        return bundled_spaces_text()
    if s.startswith(("http://", "https://")):
        return _fetch(s)
    try:
        return Path(s).read_text()
    except OSError as exc:
        raise EndpointError(f"cannot read {s}: {exc}") from None


def _endpoint_url(template: str, level: dict) -> str:
    return template.replace("{level}", json.dumps(level_to_json(level), separators=(",", ":")))


def ingest_space(source, level=None, check_bounds: bool = True) -> NewformSpace:
    level = _as_level(level)
    s = str(source)
    if s.startswith(("http://", "https://")) and "{level}" in s:
        s = _endpoint_url(s, level)
    text = read_source(s)
    digest = hashlib.sha256(text.encode()).hexdigest()
    forms, dims = [], []
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise NewformSchemaError(f"line {n}: invalid JSON ({exc.msg})") from None
        if isinstance(obj, dict) and obj.get("space"):
            if "dimension" not in obj or not isinstance(obj["dimension"], int):
                raise NewformSchemaError(f"line {n}: missing field 'dimension'")
            if level_from_json(obj.get("level", [])) == level:
                dims.append(obj["dimension"])
            continue
        try:
            rec = record_from_json(obj)
        except NewformSchemaError as exc:
            raise NewformSchemaError(f"line {n}: {exc}") from None
        if rec.level != level:
            continue
        if check_bounds:
            check_deligne(rec)
        forms.append(rec)
    dim = None
    if dims:
        if len(set(dims)) > 1:
            raise NewformSchemaError(f"conflicting dimensions for level {level_str(level)}")
        dim = dims[0]
        if forms and len(forms) > dim:
            raise NewformSchemaError(f"{len(forms)} forms exceed the stated dimension {dim}")
    return NewformSpace(level, tuple(forms), dim, digest)


def ingest_newforms(source, level=None, check_bounds: bool = True) -> list[NewformRecord]:
    """Validated records at `level` from a file, URL or the bundled data."""
    return list(ingest_space(source, level, check_bounds).forms)


def load_records(source, check_bounds: bool = True) -> list[NewformRecord]:
    """Every newform record in a source, whatever its level."""
    text = read_source(source)
    out = []
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise NewformSchemaError(f"line {n}: invalid JSON ({exc.msg})") from None
        if isinstance(obj, dict) and obj.get("space"):
            continue
        try:
            rec = record_from_json(obj)
        except NewformSchemaError as exc:
            raise NewformSchemaError(f"line {n}: {exc}") from None
        if check_bounds:
            check_deligne(rec)
        out.append(rec)
    return out


def write_records(records: Iterable[NewformRecord], path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# norms and congruences

def _trace_poly(orbit: FrobeniusTrace) -> Poly:
    """(X - a)(X - sigma a) = X^2 - Tr(a) X + N(a)."""
    return Poly([Fraction(orbit.norm), Fraction(-orbit.trace), Fraction(1)])


def compositum_norm(a_g: Poly, orbit: FrobeniusTrace, F: CoefficientField) -> int:
    """N_{L/Q}(prod_sigma (a_g - sigma(a))) with L the compositum of K and K_g."""
    beta = _trace_poly(orbit).compose(a_g) % F.h
    n = F.norm(beta)
    if not F.contains_sqrt5:
        n = n * n
    if n.denominator != 1:
        raise ArithmeticError("non-integral norm; eigenvalue is not an algebraic integer")
    return int(n)


def multiplicative_norm(a_g: Poly, NQ: int, F: CoefficientField) -> int:
    beta = (a_g * a_g - Poly([Fraction((NQ + 1) ** 2)])) % F.h
    n = F.norm(beta)
    if n.denominator != 1:
        raise ArithmeticError("non-integral norm; eigenvalue is not an algebraic integer")
    return int(n)


@dataclass(frozen=True)
class CongruenceCondition:
    kind: str           # 'good' or 'multiplicative'
    value: int

    def allows(self, p: int) -> bool:
        return self.value % p == 0


def congruence_filter(g: NewformRecord, P: PrimeIdealK, orbit=None) -> CongruenceCondition:
    """The divisibility a_P(g) = a_P(J) (mod p) or a_P(g)^2 = (N(P)+1)^2 (mod p) must satisfy."""
    F = g.field
    a = g.eigenvalue(P)
    if orbit is None or orbit == "multiplicative":
        return CongruenceCondition("multiplicative", multiplicative_norm(a, P.norm, F))
    return CongruenceCondition("good", compositum_norm(a, orbit, F))


# ---------------------------------------------------------------------------
# residue curves and T(g, Q)

def _fifth_roots(x: int, q: int) -> list[int]:
    return [w for w in range(q) if pow(w, 5, q) == x % q]


@dataclass(frozen=True)
class ResidueCurve:
    u: int
    v: int
    w: int
    trace: Optional[FrobeniusTrace]
    excluded: str = ""


def case_sign(case: str) -> str:
    if case == "I":
        return PLUS
    if case == "II":
        return MINUS
    raise ValueError("case must be 'I' or 'II'")


@lru_cache(maxsize=None)
def residue_curves(q: int, residue_degree: int, sign: str) -> tuple:
    """Traces at a prime of residue field F_{q^f} of all residue Frey curves."""
    if q in (2, 5):
        raise ValueError("auxiliary primes must be prime to 10")
    out = []
    for u in range(1, q):
        for v in range(1, q):
            for w in _fifth_roots(u + v, q):
                f = [int(c) % q for c in frey_rhs(5, sign, w, u - v).coeffs]
                try:
                    tr = trace_of_prime_field_curve(f, q, residue_degree)
                    out.append(ResidueCurve(u, v, w, tr))
                except (RMFactorizationError, ArithmeticError, ValueError) as exc:
                    out.append(ResidueCurve(u, v, w, None, str(exc)))
    return tuple(out)


def _is_smooth_mod(q: int, sign: str, w: int, d: int) -> bool:
    from .poly import poly_discriminant
    F = frey_rhs(5, sign, w, d)
    return poly_discriminant(F) % q != 0


def _chi0_value(chi0, P: PrimeIdealK) -> int:
    if chi0 is None or chi0 == 1:
        return 1
    return quadratic_residue_symbol(chi0, P)


@dataclass(frozen=True)
class TValue:
    prime: str
    value: int
    factors: tuple              # (N(Q), multiplicative part, product part)
    excluded: tuple = ()


def trace_bound_T(g: NewformRecord, P: PrimeIdealK, case: str, chi0=1) -> TValue:
    q = P.residue_char
    if q in (2, 5):
        raise ValueError("T(g, Q) needs Q prime to 10")
    sign = case_sign(case)
    F = g.field
    a = g.eigenvalue(P)
    mult = multiplicative_norm(a, P.norm, F)
    eps = _chi0_value(chi0, P)
    prod = 1
    excluded = []
    for rc in residue_curves(q, P.residue_degree, sign):
        if rc.trace is None or not _is_smooth_mod(q, sign, rc.w, rc.u - rc.v):
            excluded.append((rc.u, rc.v, rc.w))
            continue
        prod *= compositum_norm(a, rc.trace.twisted(eps), F)
    value = P.norm * mult * prod
    return TValue(P.label, value, (P.norm, mult, prod), tuple(excluded))


# ---------------------------------------------------------------------------
# elimination

@dataclass
class FormResult:
    label: str
    chi0: str
    T: list = field(default_factory=list)       # [(prime label, T)]
    gcd: int = 0
    cm: Optional[bool] = None

    @property
    def bounded(self) -> bool:
        return self.gcd != 0

    @property
    def survivors(self) -> Optional[tuple]:
        if self.gcd == 0:
            return None
        return tuple(sorted(factorint(abs(self.gcd)))) if abs(self.gcd) > 1 else ()

    def verdict(self) -> str:
        if self.bounded:
            return "survivors {" + ", ".join(map(str, self.survivors)) + "}"
        if self.cm:
            return "unbounded: CM obstruction, standard elimination insufficient"
        return "unbounded: gcd is 0"


@dataclass
class EliminationReport:
    case: str
    aux_primes: tuple
    results: list = field(default_factory=list)
    vacuous: bool = False
    notes: list = field(default_factory=list)
    provenance: str = ""

    @property
    def all_bounded(self) -> bool:
        return self.vacuous or all(r.bounded for r in self.results)

    @property
    def survivors(self) -> Optional[frozenset]:
        """Union of survivors over all forms and twists, None if some form is unbounded."""
        if self.vacuous:
            return frozenset()
        if not self.results:
            return None             # nothing was compared, nothing is eliminated
        out = set()
        for r in self.results:
            if not r.bounded:
                return None
            out |= set(r.survivors)
        return frozenset(out)

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "aux_primes": list(self.aux_primes),
            "vacuous": self.vacuous,
            "forms": [{"label": r.label, "chi0": r.chi0, "T": [[lab, str(t)] for lab, t in r.T],
                       "gcd": str(r.gcd),
                       "survivors": None if r.survivors is None else list(r.survivors),
                       "cm": r.cm, "verdict": r.verdict()} for r in self.results],
            "survivors": None if self.survivors is None else sorted(self.survivors),
            "notes": list(self.notes),
            "provenance": self.provenance,
        }

    def lines(self) -> list[str]:
        out = [f"case {self.case}, auxiliary primes {list(self.aux_primes)}"]
        if self.vacuous:
            out.append("  no newforms at level dividing q5: contradiction for every p")
        for r in self.results:
            out.append(f"  {r.label} chi0={r.chi0}: gcd {r.gcd}; {r.verdict()}")
        s = self.survivors
        out.append("  survivors: " + ("unbounded" if s is None else
                                       "{" + ", ".join(map(str, sorted(s))) + "}"))
        for n in self.notes:
            out.append(f"  note: {n}")
        return out


RESIDUE_NOTE = ("c mod q is taken over all fifth roots of a^p + b^p in F_q, "
                "including c = 0; split q uses every prime above q")


def _provenance(forms: Sequence[NewformRecord]) -> str:
    blob = "\n".join(json.dumps(f.to_json(), sort_keys=True) for f in forms)
    return hashlib.sha256(blob.encode()).hexdigest()


def eliminate(case: str, aux_primes: Sequence[int], forms: Sequence[NewformRecord],
              spaces: Sequence[NewformSpace] = (), chi0s=None) -> EliminationReport:
    if not aux_primes:
        raise ValueError("need at least one auxiliary prime")
    aux = tuple(sorted(set(int(q) for q in aux_primes)))
    if any(q in (2, 5) for q in aux):
        raise ValueError("auxiliary primes must be prime to 10")
    rep = EliminationReport(case, aux, notes=[RESIDUE_NOTE], provenance=_provenance(forms))
    if case == "I":
        levels = [{}, {Q5.label: 1}]
        empty = {tuple(sorted(s.level.items())) for s in spaces if s.asserted_empty}
        if not forms and all(tuple(sorted(l.items())) in empty for l in levels):
            rep.vacuous = True
            return rep
        if not forms:
            rep.notes.append("no data asserting that the spaces at (1) and q5 are empty")
    if case == "II":
        chis = list(chi0s) if chi0s is not None else list(selmer_group([Q2]))
    else:
        chis = [1]
    for g in forms:
        for chi in chis:
            res = FormResult(g.label, str(chi), cm=g.cm)
            acc = 0
            for q in aux:
                for P in factor_rational_prime(q):
                    t = trace_bound_T(g, P, case, chi)
                    res.T.append((P.label, t.value))
                    acc = math.gcd(acc, t.value)
            res.gcd = acc
            rep.results.append(res)
    if case == "I" and not forms and not rep.vacuous:
        rep.results = []
    return rep


# ---------------------------------------------------------------------------
# synthetic forms

def synthetic_form(label: str, level: dict, traces: dict, cm: Optional[bool] = None) -> NewformRecord:
    """A record over K = Q[x]/(x^2 - x - 1) with a_Q(g) = the first element of each trace pair."""
    eigs = {}
    for lab, tr in traces.items():
        a = tr.a if isinstance(tr, FrobeniusTrace) else tr
        eigs[lab] = (Fraction(a.x), Fraction(a.y))
    return NewformRecord(label, dict(level), (-1, -1, 1), eigs, cm)


def rational_form(label: str, level: dict, eigs: dict, cm: Optional[bool] = None) -> NewformRecord:
    return NewformRecord(label, dict(level), (0, 1),
                         {k: (Fraction(v),) for k, v in eigs.items()}, cm)
