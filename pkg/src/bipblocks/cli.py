"""Command-line front end: JSON serialization, table rendering, a disk
cache for solved matrices, and a verifier that recomputes the catalogued
block families and checks them against built-in fixtures.

Input documents are JSON objects {"e", "kappa", "charp", "comp1",
"comp2"}; matrices are emitted as {"block", "rows", "cols", "entries",
"jBounds", "flags"}. Every fixture value carries a short provenance tag
(see the notes that accompany the source distribution).
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import click

from .core import Bipartition, Params, bip
from .blocks import (
    BlockDescriptor, BlockKey, block_key, classify_type, enumerate_block,
    exceptional_bips, family_from_type_params, weight,
)
from .crystal import is_restricted, is_regular, mu_diamond
from .js import (
    DecompMatrix, decomposition_matrix, hook_pairs, js_valuation,
    matrix_from_members, order_from_members,
)

SOLVER_VERSION = 1
CACHE_ENV = "BIPBLOCKS_CACHE_DIR"


# ---------------------------------------------------------------------------
# serialization

def _bip_doc(b: Bipartition) -> dict:
    return {"comp1": list(b.comp1), "comp2": list(b.comp2)}


def _key_doc(key: BlockKey) -> dict:
    return {"n": key.n, "content": list(key.content)}


def serialize(value) -> str:
    """Canonical JSON text for the documented value types."""
    if isinstance(value, Bipartition):
        doc = _bip_doc(value)
    elif isinstance(value, BlockDescriptor):
        doc = {
            "block": _key_doc(value.key),
            "weight": value.weight,
            "delta": list(value.delta),
            "isCore": value.is_core,
            "type": value.btype,
            "nucleus": None if value.nucleus is None
            else _bip_doc(value.nucleus),
            "zSet": None if value.z_set is None else sorted(value.z_set),
            "typeParams": None if value.type_params is None
            else list(value.type_params),
            "swapped": value.swapped,
        }
    elif isinstance(value, DecompMatrix):
        doc = {
            "block": _key_doc(value.block),
            "rows": [_bip_doc(b) for b in value.rows],
            "cols": [_bip_doc(b) for b in value.cols],
            "entries": [list(r) for r in value.entries],
            "jBounds": [list(r) for r in value.jbounds],
            "flags": [list(r) for r in value.flags],
        }
    elif isinstance(value, VerifyReport):
        doc = {
            "caseId": value.case_id,
            "checks": [{"name": c.name, "expected": c.expected,
                        "actual": c.actual, "pass": c.passed}
                       for c in value.checks],
            "overall": value.overall,
        }
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
    return json.dumps(doc, indent=2) + "\n"


def _load_doc(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"parse error at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ValueError("parse error at line 1, column 1: "
                         "expected a JSON object")
    return doc


def _parse_bip_fields(doc: dict, where: str = "") -> Bipartition:
    for field in ("comp1", "comp2"):
        if field not in doc:
            raise ValueError(f"missing field {where}{field}")
        if not isinstance(doc[field], list):
            raise ValueError(f"field {where}{field} must be a list")
    return bip(doc["comp1"], doc["comp2"])


def _parse_key_fields(doc: dict) -> BlockKey:
    if "n" not in doc or "content" not in doc:
        raise ValueError("missing field block.n or block.content")
    return BlockKey(int(doc["n"]), tuple(int(x) for x in doc["content"]))


def parse(text: str):
    """Inverse of serialize; the value type is inferred from the keys."""
    doc = _load_doc(text)
    if "caseId" in doc:
        checks = tuple(Check(c["name"], c["expected"], c["actual"],
                             c["pass"]) for c in doc["checks"])
        return VerifyReport(doc["caseId"], checks, doc["overall"])
    if "entries" in doc:
        return DecompMatrix(
            block=_parse_key_fields(doc["block"]),
            rows=tuple(_parse_bip_fields(d, "rows.") for d in doc["rows"]),
            cols=tuple(_parse_bip_fields(d, "cols.") for d in doc["cols"]),
            entries=tuple(tuple(int(x) for x in r) for r in doc["entries"]),
            jbounds=tuple(tuple(int(x) for x in r) for r in doc["jBounds"]),
            flags=tuple(tuple(str(x) for x in r) for r in doc["flags"]))
    if "weight" in doc and "block" in doc:
        return BlockDescriptor(
            key=_parse_key_fields(doc["block"]),
            weight=int(doc["weight"]),
            delta=tuple(doc["delta"]),
            is_core=doc["isCore"],
            btype=doc["type"],
            nucleus=None if doc["nucleus"] is None
            else _parse_bip_fields(doc["nucleus"], "nucleus."),
            z_set=None if doc["zSet"] is None else frozenset(doc["zSet"]),
            type_params=None if doc["typeParams"] is None
            else tuple(doc["typeParams"]),
            swapped=doc["swapped"])
    if "comp1" in doc:
        return _parse_bip_fields(doc)
    raise ValueError("unrecognized document shape")


# ---------------------------------------------------------------------------
# matrix cache

def _cache_dir() -> str:
    return os.environ.get(
        CACHE_ENV, os.path.join(os.path.expanduser("~"), ".cache",
                                "bipblocks"))


def _cache_path(key: BlockKey, p: Params) -> str:
    ident = json.dumps({
        "version": SOLVER_VERSION, "e": p.e, "kappa": list(p.kappa),
        "charp": p.charp, "n": key.n, "content": list(key.content)})
    digest = hashlib.sha256(ident.encode()).hexdigest()
    return os.path.join(_cache_dir(), digest + ".json")


def cached_matrix(key: BlockKey, p: Params,
                  use_cache: bool = True) -> DecompMatrix:
    """The block's matrix, read from the content-addressed cache when
    possible. The solver version is part of the key, so entries written
    by older solvers are simply never hit."""
    if not use_cache:
        return decomposition_matrix(key, p)
    path = _cache_path(key, p)
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            value = parse(fh.read())
        if isinstance(value, DecompMatrix):
            return value
    matrix = decomposition_matrix(key, p)
    os.makedirs(_cache_dir(), exist_ok=True)
    tmp = f"{path}.{os.getpid()}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(serialize(matrix))
    os.replace(tmp, path)  # last writer wins; content is identical anyway
    return matrix


# ---------------------------------------------------------------------------
# verifier

@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    case_id: str
    checks: tuple[Check, ...]
    overall: bool


@dataclass(frozen=True)
class Probe:
    """One fixture entry: a named quantity with its expected value and a
    provenance tag pointing at the source notes."""

    kind: str
    payload: tuple
    note: str


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    block_type: str
    conditions: str  # inequality chain over i, j, k, l, m, e
    mu: tuple[str, str]
    default_e: int
    default_window: tuple[int, ...]
    probes: tuple[Probe, ...]


_NAMES4 = ("i", "j", "k", "l")
_NAMES5 = ("i", "j", "k", "l", "m")


def _case_namespace(spec: CaseSpec, e: int, window: tuple[int, ...]) -> dict:
    names = _NAMES4 if spec.block_type == "II" else _NAMES5
    if len(window) != len(names):
        raise ValueError(f"{spec.case_id} takes {len(names)} window "
                         f"parameters, got {len(window)}")
    ns = dict(zip(names, window))
    ns["e"] = e
    return ns


def _eval(expr: str, ns: dict):
    # the namespace goes in globals so comprehension scopes can see it
    return eval(expr, {"__builtins__": {"range": range}, **ns})  # noqa: S307


def _label_args(fam, name: str, argexpr: str, ns: dict):
    """Evaluate an args expression to a list of members. Single tuples
    and lists of tuples are both accepted; entries may be guarded away
    by the window, giving an empty list."""
    value = _eval(argexpr, ns)
    if isinstance(value, tuple):
        value = [value]
    return [(f"{name}{tuple(a)}", fam.bip_of(name, a)) for a in value]


def verify_case(spec: CaseSpec, e: Optional[int] = None,
                window: Optional[tuple[int, ...]] = None) -> VerifyReport:
    """Recompute the family named by a case and diff it against the
    fixture. Raises on an instantiation that violates the case's
    inequality constraints."""
    e = spec.default_e if e is None else e
    window = spec.default_window if window is None else tuple(window)
    ns = _case_namespace(spec, e, window)
    if not _eval(spec.conditions, ns):
        raise ValueError(f"instantiation {window} violates "
                         f"'{spec.conditions}'")
    fam = family_from_type_params(spec.block_type, e, window)
    ns["z"] = len(fam.z_set)
    mu = fam.bip_of(spec.mu[0], _eval(spec.mu[1], ns))
    matrix = None
    order = None

    def need_matrix():
        nonlocal matrix
        if matrix is None:
            matrix = matrix_from_members(fam.members(), fam.params)
        return matrix

    checks = []

    def record(name, expected, actual):
        checks.append(Check(name, expected, actual, expected == actual))

    for probe in spec.probes:
        kind, payload = probe.kind, probe.payload
        if kind == "restricted":
            record("mu restricted", payload[0],
                   is_restricted(mu, fam.params)[0])
        elif kind == "partner":
            name, argexpr = payload
            want = fam.bip_of(name, _eval(argexpr, ns))
            got = mu_diamond(mu, fam.params)
            record("mu partner", _bip_doc(want), _bip_doc(got))
        elif kind == "member-count":
            record("member count", _eval(payload[0], ns),
                   len(fam.members()))
        elif kind == "restricted-count":
            record("restricted columns", payload[0],
                   len(need_matrix().cols))
        elif kind == "column-max":
            mat = need_matrix()
            worst = max(mat.entry(lam, col)
                        for lam in mat.rows for col in mat.cols)
            record("largest entry", payload[0], worst)
        elif kind in ("dn", "jbound"):
            name, argexpr, value = payload
            mat = need_matrix()
            get = mat.entry if kind == "dn" else mat.jbound
            for text, lam in _label_args(fam, name, argexpr, ns):
                record(f"{kind}({text})", value, get(lam, mu))
        elif kind == "tau":
            tau_expr, beta_name, beta_expr = payload
            mat = need_matrix()
            tau = fam.bip_of("hook", _eval(tau_expr, ns))
            beta = fam.bip_of(beta_name, _eval(beta_expr, ns))
            record("J(tau) forces the chain top",
                   1 - mat.entry(beta, mu), mat.jbound(tau, mu))
        elif kind == "order":
            if order is None:
                order = order_from_members(fam.members(), fam.params)
            (na, ea), (nb, eb), expect = payload
            a = fam.bip_of(na, _eval(ea, ns))
            b = fam.bip_of(nb, _eval(eb, ns))
            record(f"order {na}{_eval(ea, ns)} above {nb}{_eval(eb, ns)}",
                   expect, order.dominates(a, b))
        else:
            raise ValueError(f"unknown probe kind {kind}")
    return VerifyReport(spec.case_id, tuple(checks),
                        all(c.passed for c in checks))


def _shared_probes(partner: Optional[tuple[str, str]]) -> tuple[Probe, ...]:
    out = [
        Probe("restricted", (True,), "L.res"),
        Probe("member-count", ("2*e*z + (e-z) + z*(z-1)//2*(e-z)",),
              "F.count"),
        Probe("column-max", (1,), "T.main"),
    ]
    if partner is not None:
        out.insert(1, Probe("partner", partner, "L.dm"))
    return tuple(out)


def _stacked_column_probes() -> tuple[Probe, ...]:
    # shared by the two three-runner windows that survive to a table
    return (
        Probe("dn", ("hook", "(i+1,i,1)", 1), "TA.1"),
        Probe("dn", ("downdownup", "(i-1,i+1,i)", 0), "TA.2"),
        Probe("dn", ("hook", "(i+1,i+2,2)", 1), "TA.3"),
        Probe("dn", ("hook", "(i+1,i+1,2)", 0), "TA.4"),
        Probe("dn", ("hook", "[(i+2,i+2,1)] if j>=i+2 else []", 1), "TA.5"),
        Probe("dn", ("hook", "(i+1,i+1,1)", 1), "TA.6"),
        Probe("jbound", ("hook", "(i+1,i+1,1)", 2), "TA.6"),
        Probe("dn", ("down", "(i,)", 0), "TA.7"),
        Probe("dn", ("hook", "[(i+1,x,2) for x in range(i+3,k+1)]", 0),
              "TA.8"),
        Probe("dn", ("down", "[(x,) for x in range(j+1,k+1)]", 0), "TA.9"),
        Probe("dn", ("hook", "[(x,x,1) for x in range(i+3,j+1)]", 0),
              "TA.10"),
    )


def _beta_chain_probes(tau_expr: str) -> tuple[Probe, ...]:
    return (
        Probe("dn", ("hook", "(i,i-1,1)", 1), "TC.b1"),
        Probe("dn", ("hook", "(i,i,1)", 1), "TC.b2"),
        Probe("dn", ("hook", "(i-1,i-1,2)", 1), "TC.b3"),
        Probe("dn", ("hook", "(i-1,i,2)", 1), "TC.b4"),
        Probe("tau", (tau_expr, "hook", "(i-1,i-1,2)"), "TC.tau"),
        Probe("order", (("hook", "(i-1,i,2)"), ("hook", "(i-1,i-1,2)"),
                        True), "HF.4"),
        Probe("order", (("hook", "(i-1,i-1,2)"), ("hook", "(i,i,1)"),
                        True), "HF.4"),
        Probe("order", (("hook", "(i,i,1)"), ("hook", "(i,i-1,1)"),
                        True), "HF.4"),
    )


def _simple_case(case_id, btype, mu, conditions, partner, e, window):
    return CaseSpec(case_id, btype, conditions, mu, e, window,
                    _shared_probes(partner))


_III_ROWS = [
    # (mu, conditions, partner, default e, default window)
    (("hook", "(i+1,i-1,2)"), "k<l<m", ("hook", "(i-1,l+1,2)"),
     5, (0, 1, 1, 2, 3)),
    (("hook", "(i+1,i-1,2)"), "k<l==m", ("hook", "(i-1,i-1,2)"),
     4, (0, 1, 1, 2, 2)),
    (("hook", "(i+1,i-1,2)"), "k==l<m<e+i-2", ("downdownup",
     "(i-1,i-2,k+1)"), 5, (0, 1, 1, 1, 2)),
    (("hook", "(i+1,i-1,2)"), "k==l<m==e+i-2", ("hook", "(i-1,k+1,1)"),
     4, (0, 1, 1, 1, 2)),
    (("hook", "(i+1,i-1,2)"), "k==l==m", ("hook", "(i-1,i,1)"),
     3, (0, 1, 1, 1, 1)),
    (("hook", "(i+1,i,2)"), "j<k<l-1", ("downdownup", "(l-1,l,j+1)"),
     6, (0, 1, 2, 4, 4)),
    (("hook", "(i+1,i,2)"), "j<k==l-1", ("hook", "(k+1,j+1,1)"),
     5, (0, 1, 2, 3, 3)),
    (("hook", "(i+1,i,2)"), "j<k==l", ("hook", "(i-1,j+1,1)"),
     5, (0, 2, 3, 3, 3)),
    (("hook", "(i+1,i,2)"), "j==k<l", ("hook", "(l,i+1,1)"),
     4, (0, 1, 1, 2, 2)),
    (("hook", "(i+1,i,2)"), "j==k==l", ("hook", "(i-1,i+1,1)"),
     5, (0, 2, 2, 2, 2)),
    (("hook", "(i+1,l,2)"), "k<l-1 and l==m", ("downdownup", "(l-1,l,i)"),
     5, (0, 1, 1, 3, 3)),
    (("hook", "(i+1,l,2)"), "k==l-1 and l==m", ("hook", "(k+1,i,1)"),
     4, (0, 1, 1, 2, 2)),
    (("hook", "(i+1,m,2)"), "k<l-1 and l<m", ("downdownup", "(l-1,l,i)"),
     6, (0, 1, 1, 3, 4)),
    (("hook", "(i+1,m,2)"), "k==l-1 and l<m", ("hook", "(k+1,i,1)"),
     5, (0, 1, 1, 2, 3)),
    (("hook", "(i+1,m,2)"), "k==l<m", ("hook", "(i-1,i,1)"),
     4, (0, 1, 1, 1, 2)),
    (("downdownup", "(i+1,i+2,m)"), "i+1<j and k<l<m", ("hook", "(l,i,2)"),
     6, (0, 2, 2, 3, 4)),
    (("downdownup", "(i+1,i+2,m)"), "i+1<j and k==l<m",
     ("hook", "(i-1,i-1,2)"), 5, (0, 2, 2, 2, 3)),
    (("downdownup", "(i+1,k+1,m)"), "k<l<m", ("hook", "(i-1,i-1,2)"),
     5, (0, 1, 1, 2, 3)),
]

_IV_ROWS = [
    (("hook", "(i,i-1,2)"), "k<l<m", ("hook", "(i-1,l+1,2)"),
     4, (0, 0, 0, 1, 2)),
    (("hook", "(i,i-1,2)"), "k<l==m", ("hook", "(i-1,i-1,2)"),
     3, (0, 0, 0, 1, 1)),
    (("hook", "(i,i-1,2)"), "k==l<m<e+i-2", ("downdownup",
     "(i-1,i-2,k+1)"), 4, (0, 0, 0, 0, 1)),
    (("hook", "(i,i-1,2)"), "k==l<m==e+i-2", ("hook", "(i-1,k+1,1)"),
     3, (0, 0, 0, 0, 1)),
    (("hook", "(i,i-1,2)"), "j<k==l==m", ("hook", "(i-1,j+1,1)"),
     4, (0, 1, 2, 2, 2)),
    (("hook", "(i,i-1,2)"), "j==k==l==m", ("hook", "(i-1,i,1)"),
     4, (0, 1, 1, 1, 1)),
    (("hook", "(i,m,2)"), "j<k<l-1 and l<m", ("downdownup",
     "(l-1,l,j+1)"), 6, (0, 0, 1, 3, 4)),
    (("hook", "(i,m,2)"), "j<k==l-1 and l<m", ("hook", "(k+1,j+1,1)"),
     5, (0, 0, 1, 2, 3)),
    (("hook", "(i,m,2)"), "j<k==l<m", ("hook", "(i-1,j+1,1)"),
     5, (0, 1, 2, 2, 3)),
    (("hook", "(i,m,2)"), "j==k<l<m", ("hook", "(l,i,1)"),
     4, (0, 0, 0, 1, 2)),
    (("hook", "(i,m,2)"), "j==k==l<m", ("hook", "(i-1,i,1)"),
     4, (0, 1, 1, 1, 2)),
    (("downdownup", "(i,i+1,m)"), "i<j and k<l<m", ("hook", "(l,i,2)"),
     5, (0, 1, 1, 2, 3)),
    (("downdownup", "(i,i+1,m)"), "i<j and k==l<m",
     ("hook", "(i-1,i-1,2)"), 4, (0, 1, 1, 1, 2)),
    (("downdownup", "(i,k+1,m)"), "k<l<m", ("hook", "(i-1,i-1,2)"),
     4, (0, 0, 0, 1, 2)),
]


def _build_cases() -> dict[str, CaseSpec]:
    cases = {}
    cases["II-main"] = CaseSpec(
        "II-main", "II", "k<l", ("hook", "(i,i-1,2)"), 5, (0, 0, 1, 3),
        _shared_probes(None) + (
            Probe("dn", ("downdownup", "(i,l,i-1)", 1), "T2.1"),
            Probe("dn", ("downdownup",
                         "[(i,x,i-1) for x in range(k+1,l)]", 0), "T2.2"),
            Probe("dn", ("hook", "(i,i-1,1)", 0), "T2.3"),
            Probe("dn", ("hook", "(l,i-1,2)", 0), "T2.4"),
        ))
    for num, (mu, cond, partner, e, w) in enumerate(_III_ROWS, 1):
        spec = _simple_case(f"III-{num}", "III", mu, cond, partner, e, w)
        if num in (8, 10):
            spec = CaseSpec(spec.case_id, "III", cond, mu, e, w,
                            spec.probes + _stacked_column_probes())
        cases[spec.case_id] = spec
    for num, (mu, cond, partner, e, w) in enumerate(_IV_ROWS, 1):
        spec = _simple_case(f"IV-{num}", "IV", mu, cond, partner, e, w)
        extra = ()
        if num in (5, 6, 9):
            tau = {5: "(i-1,i+1,2)", 9: "(i-1,i+1,2)",
                   6: "(e+i-2,i,2)"}[num]
            extra = _beta_chain_probes(tau)
        if num == 11:
            extra = (
                Probe("dn", ("hook", "(i,i+1,2)", 1), "TB.1"),
                Probe("dn", ("hook", "(i,i,2)", 0), "TB.2"),
                Probe("dn", ("hook", "(i+1,i+1,1)", 1), "TB.3"),
                Probe("dn", ("downdownup", "(i,i-1,m)", 1), "TB.4"),
                Probe("dn", ("hook", "(i-1,m,2)", 0), "TB.5"),
                Probe("dn", ("hook", "(i,m,1)", 0), "TB.6"),
                Probe("dn", ("hook", "(i,i-1,1)", 1), "TB.7"),
                Probe("dn", ("hook", "(i,i,1)", 1), "TB.8"),
                Probe("jbound", ("hook", "(i,i,1)", 2), "TB.8"),
                Probe("dn", ("hook", "(i-1,i-1,2)", 1), "TB.9"),
            )
        if extra:
            spec = CaseSpec(spec.case_id, "IV", cond, mu, e, w,
                            spec.probes + extra)
        cases[spec.case_id] = spec
    cases["IV-e2-H5"] = CaseSpec(
        "IV-e2-H5", "IV", "i==j==k==l==m==e+i-2",
        ("hook", "(i,i-1,2)"), 2, (0, 0, 0, 0, 0),
        _shared_probes(("hook", "(i-1,i,1)")) + (
            Probe("restricted-count", (2,), "T6.h5"),
            Probe("dn", ("hook", "(i,i-1,1)", 1), "T6.h5"),
            Probe("dn", ("hook", "(i,i,1)", 1), "T6.h5"),
            Probe("dn", ("hook", "(i-1,i-1,2)", 1), "T6.h5"),
            Probe("dn", ("hook", "(i-1,i,2)", 1), "T6.h5"),
        ))
    return cases


CASES = _build_cases()


def verify_all(workers: Optional[int] = None) -> list[VerifyReport]:
    ids = sorted(CASES)
    if workers:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: verify_case(CASES[c]), ids))
    return [verify_case(CASES[c]) for c in ids]


# ---------------------------------------------------------------------------
# rendering

def _bip_str(b: Bipartition) -> str:
    def part(q):
        return ",".join(str(x) for x in q) if q else "-"
    return f"({part(b.comp1)}|{part(b.comp2)})"


def _render_matrix_table(m: DecompMatrix) -> str:
    head = [""] + [_bip_str(c) for c in m.cols]
    body = []
    for r, lam in enumerate(m.rows):
        cells = [_bip_str(lam)]
        for c in range(len(m.cols)):
            mark = "*" if m.flags[r][c] == "clamped" else ""
            cells.append(f"{m.entries[r][c]}{mark}")
        body.append(cells)
    widths = [max(len(row[c]) for row in [head] + body)
              for c in range(len(head))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths))
             for row in [head] + body]
    lines.append("(* entry clamped from a larger bound)")
    return "\n".join(lines) + "\n"


def _render_report_table(rep: VerifyReport) -> str:
    lines = [f"{rep.case_id}: {'PASS' if rep.overall else 'FAIL'}"]
    for c in rep.checks:
        status = "ok" if c.passed else "FAIL"
        lines.append(f"  [{status}] {c.name}: expected {c.expected!r}, "
                     f"got {c.actual!r}")
    return "\n".join(lines) + "\n"


def _render_kv_table(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


# ---------------------------------------------------------------------------
# command plumbing

def _read_doc(text: str) -> dict:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    return _load_doc(text)


def _parse_kappa(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise click.UsageError("--kappa takes two comma-separated integers")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise click.UsageError("--kappa takes two comma-separated integers")


def _resolve(doc: Optional[dict], e, kappa, charp) -> Params:
    doc = doc or {}
    if e is None:
        e = doc.get("e")
    if kappa is None and "kappa" in doc:
        kappa = tuple(doc["kappa"])
    if charp is None:
        charp = doc.get("charp", 0)
    if e is None or kappa is None:
        raise click.UsageError("supply --e and --kappa (or a document "
                               "carrying them)")
    return Params.make(int(e), tuple(kappa), int(charp))


def _resolve_bip(doc_text: Optional[str], e, kappa, charp):
    if doc_text is None:
        raise click.UsageError("this command needs --bip")
    doc = _read_doc(doc_text)
    return _parse_bip_fields(doc), _resolve(doc, e, kappa, charp)


def _resolve_block(bip_text, block_text, e, kappa, charp):
    """Either document flavour pins down a block."""
    if block_text is not None:
        doc = _read_doc(block_text)
        p = _resolve(doc, e, kappa, charp)
        if "n" in doc:
            return _parse_key_fields(doc), p
        b = _parse_bip_fields(doc)
        return block_key(b, p)[0], p
    if bip_text is not None:
        b, p = _resolve_bip(bip_text, e, kappa, charp)
        return block_key(b, p)[0], p
    raise click.UsageError("this command needs --bip or --block")


def _common(fn):
    fn = click.option("--e", "e", type=int, default=None,
                      help="Quantum characteristic.")(fn)
    fn = click.option("--kappa", default=None, callback=lambda c, p, v:
                      _parse_kappa(v) if v is not None else None,
                      help="Charges, e.g. 0,3.")(fn)
    fn = click.option("--charp", type=int, default=None,
                      help="Ground-field characteristic (default 0).")(fn)
    fn = click.option("--bip", "bip_doc", default=None,
                      help="Bipartition document (JSON, or @file).")(fn)
    fn = click.option("--block", "block_doc", default=None,
                      help="Block document (JSON, or @file).")(fn)
    fn = click.option("--format", "fmt",
                      type=click.Choice(["json", "table"]),
                      default="json", help="Output format.")(fn)
    fn = click.option("--no-cache", is_flag=True,
                      help="Bypass the matrix cache.")(fn)
    return fn


def _run(body):
    try:
        body()
    except click.UsageError:
        raise
    except (ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@click.group()
def main():
    """Block combinatorics and decomposition matrices for pairs of
    partitions on an e-runner abacus."""


@main.group("bip")
def bip_group():
    """Commands about a single bipartition."""


@bip_group.command("info")
@_common
def bip_info(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """Size, block, weight and crystal status of a bipartition."""
    def body():
        b, p = _resolve_bip(bip_doc, e, kappa, charp)
        key, _ = block_key(b, p)
        info = [("bipartition", _bip_str(b)), ("n", b.size),
                ("content", list(key.content)), ("weight", weight(b, p)),
                ("restricted", is_restricted(b, p)[0]),
                ("regular", is_regular(b, p))]
        if fmt == "table":
            click.echo(_render_kv_table(info), nl=False)
        else:
            click.echo(json.dumps(dict(info), indent=2))
    _run(body)


@bip_group.command("restricted")
@_common
def bip_restricted(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """Good-node stripping test, with the residue trace."""
    def body():
        b, p = _resolve_bip(bip_doc, e, kappa, charp)
        ok, trace = is_restricted(b, p)
        doc = {"restricted": ok, "residues": list(trace.residues)}
        if fmt == "table":
            click.echo(_render_kv_table(doc.items()), nl=False)
        else:
            click.echo(json.dumps(doc, indent=2))
    _run(body)


@bip_group.command("diamond")
@_common
def bip_diamond(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """Regular partner of a restricted bipartition."""
    def body():
        b, p = _resolve_bip(bip_doc, e, kappa, charp)
        partner = mu_diamond(b, p)
        if fmt == "table":
            click.echo(_bip_str(partner))
        else:
            click.echo(serialize(partner), nl=False)
    _run(body)


@main.group("block")
def block_group():
    """Commands about a whole block."""


@block_group.command("info")
@_common
def block_info(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """Type, nucleus and runner data of a block."""
    def body():
        key, p = _resolve_block(bip_doc, block_doc, e, kappa, charp)
        desc = classify_type(key, p)
        if fmt == "table":
            pairs = [("n", desc.key.n), ("content", list(desc.key.content)),
                     ("weight", desc.weight), ("type", desc.btype),
                     ("core", desc.is_core),
                     ("nucleus", "-" if desc.nucleus is None
                      else _bip_str(desc.nucleus)),
                     ("zSet", "-" if desc.z_set is None
                      else sorted(desc.z_set)),
                     ("typeParams", "-" if desc.type_params is None
                      else list(desc.type_params))]
            click.echo(_render_kv_table(pairs), nl=False)
        else:
            click.echo(serialize(desc), nl=False)
    _run(body)


@block_group.command("enumerate")
@_common
def block_enumerate(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """All members, most dominant first."""
    def body():
        key, p = _resolve_block(bip_doc, block_doc, e, kappa, charp)
        members = enumerate_block(key, p)
        if fmt == "table":
            for m in members:
                click.echo(_bip_str(m))
        else:
            click.echo(json.dumps([_bip_doc(m) for m in members], indent=2))
    _run(body)


@block_group.command("exceptional")
@_common
def block_exceptional(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """Exceptional members of a weight-3 block, with their labels."""
    def body():
        key, p = _resolve_block(bip_doc, block_doc, e, kappa, charp)
        labels = exceptional_bips(key, p)
        if fmt == "table":
            for lab in labels:
                click.echo(f"{lab}  {_bip_str(lab.bipartition)}")
        else:
            click.echo(json.dumps(
                [{"label": str(lab), "kind": lab.kind,
                  "args": list(lab.args),
                  "bipartition": _bip_doc(lab.bipartition)}
                 for lab in labels], indent=2))
    _run(body)


@main.group("js")
def js_group():
    """Valuations and the refined dominance order."""


@js_group.command("val")
@click.option("--bip", "bip_docs", multiple=True,
              help="Two bipartition documents, dominant first.")
@click.option("--e", "e", type=int, default=None)
@click.option("--kappa", default=None, callback=lambda c, p, v:
              _parse_kappa(v) if v is not None else None)
@click.option("--charp", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]),
              default="json")
def js_val(bip_docs, e, kappa, charp, fmt):
    """Signed valuation sum between two members of one block."""
    def body():
        if len(bip_docs) != 2:
            raise click.UsageError("supply --bip twice, dominant first")
        doc_a, doc_b = (_read_doc(t) for t in bip_docs)
        p = _resolve(doc_a, e, kappa, charp)
        a, b = _parse_bip_fields(doc_a), _parse_bip_fields(doc_b)
        value = js_valuation(a, b, p)
        doc = {"valuation": value, "pairs": len(hook_pairs(a, b, p))}
        if fmt == "table":
            click.echo(_render_kv_table(doc.items()), nl=False)
        else:
            click.echo(json.dumps(doc, indent=2))
    _run(body)


@js_group.command("order")
@_common
def js_order_cmd(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """Strict relations of the refined order on a block."""
    def body():
        key, p = _resolve_block(bip_doc, block_doc, e, kappa, charp)
        order = order_from_members(enumerate_block(key, p), p)
        idx = {m: n for n, m in enumerate(order.members)}
        rel = sorted((idx[a], idx[b]) for a, b in order.strict)
        if fmt == "table":
            for a, b in rel:
                click.echo(f"{_bip_str(order.members[a])} > "
                           f"{_bip_str(order.members[b])}")
        else:
            click.echo(json.dumps(
                {"members": [_bip_doc(m) for m in order.members],
                 "relations": [list(r) for r in rel]}, indent=2))
    _run(body)


@main.command("decomp")
@_common
def decomp(e, kappa, charp, bip_doc, block_doc, fmt, no_cache):
    """Decomposition matrix of a block of weight at most three."""
    def body():
        key, p = _resolve_block(bip_doc, block_doc, e, kappa, charp)
        matrix = cached_matrix(key, p, use_cache=not no_cache)
        if fmt == "table":
            click.echo(_render_matrix_table(matrix), nl=False)
        else:
            click.echo(serialize(matrix), nl=False)
    _run(body)


@main.command("verify")
@click.option("--case", "case_id", default=None,
              help="Case identifier, e.g. III-8.")
@click.option("--e", "e", type=int, default=None)
@click.option("--params", default=None,
              help="Window parameters, e.g. 0,2,3,3,3.")
@click.option("--all", "run_all", is_flag=True, help="Run every case.")
@click.option("--list", "list_cases", is_flag=True,
              help="List the case identifiers.")
@click.option("--workers", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]),
              default="table")
def verify(case_id, e, params, run_all, list_cases, workers, fmt):
    """Recompute catalogued families and diff against the fixtures."""
    def body():
        if list_cases:
            for cid in sorted(CASES):
                click.echo(cid)
            return
        if run_all:
            reports = verify_all(workers)
        elif case_id is not None:
            if case_id not in CASES:
                raise click.UsageError(f"unknown case {case_id}")
            window = None
            if params is not None:
                window = tuple(int(x) for x in params.split(","))
            reports = [verify_case(CASES[case_id], e, window)]
        else:
            raise click.UsageError("supply --case, --all or --list")
        if fmt == "table":
            for rep in reports:
                click.echo(_render_report_table(rep), nl=False)
        else:
            for rep in reports:
                click.echo(serialize(rep), nl=False)
        if not all(rep.overall for rep in reports):
            sys.exit(1)
    _run(body)


if __name__ == "__main__":
    main()
