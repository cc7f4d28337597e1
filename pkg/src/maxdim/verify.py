"""Corpus sweeps: one check per group, collected into a report."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .catalog import CorpusFilter, corpus_specs, derived_is_nilpotent, satisfies
from .constructors import construct
from .group import CapExceeded
from .invariants import (
    compute_invariants,
    lemma22_check,
    lemma24_check,
    m_bruteforce,
    m_soluble,
    md_search,
)
from .lattice import frattini, quotient

TARGETS = ("thm1", "remark-m2", "lemma24", "cor23", "chain", "frattini-invariance", "oracle")

# default max orders
DEFAULT_MAX = {
    "thm1": 200, "remark-m2": 200, "lemma24": 128, "cor23": 200,
    "chain": 100, "frattini-invariance": 100, "oracle": 200,
}

# which groups each target looks at
FILTERS = {
    "thm1": ("derived_nilpotent",),
    "remark-m2": ("soluble",),
    "lemma24": ("abelian",),
    "cor23": (),
    "chain": (),
    "frattini-invariance": (),
    "oracle": ("soluble",),
}


@dataclass
class Check:
    group: str
    order: int
    status: str  # pass | fail | skipped | not_applicable
    data: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0


def _thm1(G):
    md = md_search(G).value
    m = m_bruteforce(G).value
    return md == m, {"m": m, "md": md}


def _remark(G):
    m = m_bruteforce(G).value
    dn = derived_is_nilpotent(G)
    # m <= 2 forces a nilpotent derived subgroup
    return (m > 2 or dn), {"m": m, "derived_nilpotent": dn}


def _lemma24(G):
    rep = lemma24_check(G)
    return rep.ok, {"largest_family": rep.largest_family, "m": rep.m}


def _cor23(G):
    rep = lemma22_check(G)
    return rep.ok, {
        "dim": rep.dim, "supplements": rep.supplements, "largest": rep.largest,
        "families": rep.families_checked,
        "shape_violations": len(rep.shape_violations),
        "top_violations": len(rep.top_violations),
    }


def _chain(G):
    rep = compute_invariants(G)
    vals = {k: getattr(rep, k).value for k in ("m", "md", "i")}
    return bool(rep.chain_ok()), vals


def _frattini(G):
    F = frattini(G)
    Q = quotient(G, F)
    a = (m_bruteforce(G).value, md_search(G).value)
    b = (m_bruteforce(Q).value, md_search(Q).value)
    return a == b, {"frattini": F.order, "m": a[0], "md": a[1], "m_quot": b[0], "md_quot": b[1]}


def _oracle(G):
    a, b = m_bruteforce(G).value, m_soluble(G)
    return a == b, {"m_bruteforce": a, "m_soluble": b}


CHECKS = {
    "thm1": _thm1, "remark-m2": _remark, "lemma24": _lemma24, "cor23": _cor23,
    "chain": _chain, "frattini-invariance": _frattini, "oracle": _oracle,
}


def check_group(target: str, spec: str) -> Check:
    t = time.monotonic()
    G = construct(spec)
    if target == "cor23" and G.meta.get("kind") != "fieldmod":
        return Check(spec, G.order, "not_applicable")
    try:
        if not satisfies(G, FILTERS[target]):
            return Check(spec, G.order, "not_applicable")
        ok, data = CHECKS[target](G)
    except CapExceeded as exc:
        return Check(spec, G.order, "skipped", {"reason": str(exc)},
                     1000 * (time.monotonic() - t))
    return Check(spec, G.order, "pass" if ok else "fail", data, 1000 * (time.monotonic() - t))


def _run(args):
    return check_group(*args)


@dataclass
class SweepReport:
    target: str
    max_order: int
    checks: list
    elapsed_ms: float

    @property
    def checked(self) -> list:
        return [c for c in self.checks if c.status != "not_applicable"]

    @property
    def violations(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def skipped(self) -> list:
        return [c for c in self.checks if c.status == "skipped"]

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "max_order": self.max_order,
            "checked": len(self.checked),
            "violations": len(self.violations),
            "skipped": len(self.skipped),
            "checks": [asdict(c) for c in self.checked],
            "elapsed_ms": self.elapsed_ms,
        }


def sweep(target: str, max_order: int | None = None, threads: int = 1,
          specs: list | None = None) -> SweepReport:
    """Run one check over the corpus; results come back in corpus order."""
    if target not in CHECKS:
        raise ValueError(f"unknown target {target!r}")
    max_order = DEFAULT_MAX[target] if max_order is None else max_order
    CorpusFilter(max_order)  # validates the cap
    specs = corpus_specs(max_order) if specs is None else specs
    t = time.monotonic()
    jobs = [(target, s) for s in specs]
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            checks = list(pool.map(_run, jobs, chunksize=4))
    else:
        checks = [_run(j) for j in jobs]
    return SweepReport(target, max_order, checks, 1000 * (time.monotonic() - t))

