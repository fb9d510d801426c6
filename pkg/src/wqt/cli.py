"""Command-line front end: ``verify <subcommand> [options]``.

Exit status is 0 when every selected claim passes, 1 when any fails (the
report is still written) and 2 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .verify import SCHEMA, Check, Report, Witness

ENV_CACHE = "WQT_CACHE_DIR"
CASES = ("1", "2", "3")

SUBCOMMANDS = ("params", "screening", "prop22", "fusion-f", "quadratic", "fusion-T", "exchange-T",
               "case1-truncation", "classical", "all", "expand")
# claim groups selectable with `all --claims`
CLAIM_GROUPS = ("params", "kernels", "mutations", "screening", "prop22", "fusion-f", "quadratic", "dynkin",
                "fusion-T", "exchange-T", "case1-truncation", "classical")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    cases: Tuple[str, ...] = CASES
    order: Optional[int] = None
    degree: int = 3
    claims: Tuple[str, ...] = CLAIM_GROUPS
    cache_dir: Optional[Path] = None
    output: Optional[Path] = None
    fmt: str = "text"
    jobs: int = 1
    i: Optional[int] = None
    j: Optional[int] = None
    sign: Optional[int] = None
    construction: str = "ordered"
    brute_force: Optional[bool] = None
    q0: float = 4.0
    betas: Tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    precision: int = 40
    convention: str = "q=x^2r"
    extra: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.order is not None and self.order < 1:
            raise ConfigError("--order must be >= 1")
        if self.degree < 1:
            raise ConfigError("--degree must be >= 1")
        bad = [c for c in self.claims if c not in CLAIM_GROUPS]
        if bad:
            raise ConfigError(f"unknown claim(s) {', '.join(bad)}; choose from {', '.join(CLAIM_GROUPS)}")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")


# ----------------------------------------------------------------------------
# jobs


@dataclass(frozen=True)
class Job:
    claim: str
    func: str
    args: Tuple = ()
    kwargs: Tuple[Tuple[str, object], ...] = ()

    def cache_key(self) -> str:
        blob = json.dumps([self.claim, self.func, list(self.args), list(self.kwargs), __version__],
                          sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


def _resolve(name: str):
    from . import classical, verify
    mod, _, fn = name.rpartition(".")
    return getattr({"verify": verify, "classical": classical}[mod], fn)


def _run_job(job: Job) -> List[dict]:
    kw = dict(job.kwargs)
    if job.func == "classical.verify_classical_limit":
        from .classical import PBParams
        out = _resolve(job.func)(PBParams(**kw))
    else:
        out = _resolve(job.func)(*job.args, **kw)
    reports = out if isinstance(out, list) else [out]
    return [{"report": r.to_dict(), "seconds": r.seconds} for r in reports]


def report_from_dict(d: dict) -> Report:
    checks = []
    for c in d.get("checks", []):
        w = c.get("witness")
        checks.append(Check(c["name"], c["status"] == "pass", Witness(**w) if w else None,
                            not c.get("informational", False), c.get("compared", 0)))
    return Report(d["claim"], d.get("case"), dict(d.get("indices", {})), checks,
                  list(d.get("notes", [])), dict(d.get("data", {})))


class Cache:
    """Content-addressed report cache with atomic writes."""

    def __init__(self, root: Optional[Path]):
        self.root = root
        if root is not None:
            root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, job: Job) -> Optional[List[dict]]:
        if self.root is None:
            return None
        p = self._path(job.cache_key())
        try:
            with open(p) as fh:
                return json.load(fh)
        except (OSError, ValueError):
            return None

    def put(self, job: Job, value: List[dict]):
        if self.root is None:
            return
        p = self._path(job.cache_key())
        p.parent.mkdir(parents=True, exist_ok=True)
        stored = [{"report": v["report"]} for v in value]
        atomic_write(p, json.dumps(stored))


def atomic_write(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _kw(**kw) -> Tuple[Tuple[str, object], ...]:
    return tuple(sorted((k, v) for k, v in kw.items() if v is not None))


def _quadratic_pairs(case: str, degree: int, cfg: RunConfig) -> List[Tuple[int, int]]:
    if cfg.i is not None or cfg.j is not None:
        if cfg.i is None or cfg.j is None:
            raise ConfigError("--i and --j go together")
        return [(cfg.i, cfg.j)]
    if case == "1":
        return [(1, 1), (1, 2), (2, 2)]
    return [(i, j) for j in range(1, degree + 1) for i in range(1, j + 1)]


def build_jobs(cfg: RunConfig) -> List[Job]:
    cmd = cfg.command
    groups = cfg.claims if cmd == "all" else ({
        "params": ("params", "kernels", "mutations"), "screening": ("screening",), "prop22": ("prop22",),
        "fusion-f": ("fusion-f",), "quadratic": ("quadratic", "dynkin"), "fusion-T": ("fusion-T",),
        "exchange-T": ("exchange-T",), "case1-truncation": ("case1-truncation",), "classical": ("classical",),
    }[cmd])
    N = cfg.order
    jobs: List[Job] = []
    for g in CLAIM_GROUPS:
        if g not in groups:
            continue
        if g in ("params", "kernels", "screening", "prop22", "fusion-f"):
            fn = {"params": "verify_theorem21", "kernels": "verify_kernels", "screening": "verify_screening_exchange",
                  "prop22": "verify_prop22", "fusion-f": "verify_fusion_f"}[g]
            n = N or (12 if g == "fusion-f" else 20)
            for c in cfg.cases:
                jobs.append(Job(g, f"verify.{fn}", (int(c),), _kw(N=n)))
        elif g == "mutations":
            jobs.append(Job(g, "verify.mutation_suite", (), _kw(N=min(N or 6, 20))))
        elif g == "quadratic":
            for c in cfg.cases:
                for i, j in _quadratic_pairs(c, cfg.degree, cfg):
                    con = cfg.construction if c == "3" else "ordered"
                    jobs.append(Job(g, "verify.verify_quadratic", (int(c), i, j),
                                    _kw(N=N or 12, construction=con, brute_force=cfg.brute_force)))
        elif g == "dynkin":
            if "2" in cfg.cases and "3" in cfg.cases:
                for i, j in _quadratic_pairs("2", cfg.degree, cfg):
                    jobs.append(Job(g, "verify.verify_dynkin", (i, j), _kw(N=N or 12)))
        elif g == "fusion-T":
            for c in cfg.cases:
                if cfg.i is not None:
                    pairs = [(cfg.i, cfg.j or 1)]
                elif c == "1":
                    pairs = [(1, 1), (1, 2), (2, 1)]
                else:
                    pairs = [(i, j) for i in range(1, cfg.degree + 1) for j in range(1, cfg.degree + 1)]
                signs = [cfg.sign] if cfg.sign else [1, -1]
                for i, j in pairs:
                    for s in signs:
                        jobs.append(Job(g, "verify.verify_fusion_T", (int(c), i, j, s)))
                jobs.append(Job(g, "verify.verify_fusion_chain", (int(c),), _kw(imax=2 * cfg.degree)))
            if "2" in cfg.cases:
                jobs.append(Job(g, "verify.verify_fusion_table", (), _kw(imax=cfg.degree)))
        elif g == "exchange-T":
            for c in cfg.cases:
                if c == "1":
                    pairs = [(1, 1), (1, 2), (2, 2)]
                elif cfg.i is not None:
                    pairs = [(cfg.i, cfg.j or cfg.i)]
                else:
                    pairs = [(i, j) for j in range(1, cfg.degree + 1) for i in range(1, j + 1)]
                for i, j in pairs:
                    jobs.append(Job(g, "verify.verify_exchange_T", (int(c), i, j)))
            if "2" in cfg.cases:
                jobs.append(Job(g, "verify.verify_exchange_table", (), _kw(imax=cfg.degree)))
        elif g == "case1-truncation":
            if "1" in cfg.cases or cmd == "case1-truncation":
                jobs.append(Job(g, "verify.verify_case1_truncation", (), _kw(N=N or 20)))
        elif g == "classical":
            jobs.append(Job(g, "classical.verify_classical_limit", (),
                            _kw(q0=cfg.q0, betas=tuple(cfg.betas), precision=cfg.precision,
                                convention=cfg.convention)))
    return jobs


def run_jobs(jobs: Sequence[Job], cache: Cache, n_jobs: int = 1) -> List[Tuple[Report, Optional[float]]]:
    results: List[Optional[List[dict]]] = [cache.get(j) for j in jobs]
    todo = [k for k, r in enumerate(results) if r is None]
    if n_jobs > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            fresh = list(pool.map(_run_job, [jobs[k] for k in todo]))
    else:
        fresh = [_run_job(jobs[k]) for k in todo]
    for k, v in zip(todo, fresh):
        cache.put(jobs[k], v)
        results[k] = v
    out = []
    for k, res in enumerate(results):
        for item in res:
            out.append((report_from_dict(item["report"]), item.get("seconds")))
    return out


# ----------------------------------------------------------------------------
# report documents


def render_text(reports: Sequence[Report], timings: Sequence[Optional[float]]) -> str:
    n_fail = sum(not r.passed for r in reports)
    lines = [f"schema: {SCHEMA}", f"engine: wqt {__version__}",
             f"records: {len(reports)}  passed: {len(reports) - n_fail}  failed: {n_fail}", ""]
    for r in reports:
        lines.append(r.to_text())
        lines.append("")
    lines.append("== timing (not part of the comparable body) ==")
    for r, t in zip(reports, timings):
        lines.append(f"{r.key}: {'cached' if t is None else f'{t:.3f}s'}")
    return "\n".join(lines) + "\n"


def render_json(reports: Sequence[Report], timings: Sequence[Optional[float]]) -> str:
    doc = {"schema": SCHEMA, "engine": __version__,
           "summary": {"records": len(reports), "failed": sum(not r.passed for r in reports)},
           "records": [r.to_dict() for r in reports],
           "timing": [{"key": r.key, "seconds": t} for r, t in zip(reports, timings)]}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


# ----------------------------------------------------------------------------
# expand


def run_expand(ns) -> str:
    from .model import (CaseId, Vertex, build_T, delta_rational, f_struct, kernel, params, phi)
    from .series import expand as expand_rational
    case = CaseId.parse(ns.case if ns.case != "all" else "2")
    N = ns.order or 4
    what = ns.what
    lines = []
    fmt = (lambda v: v.pretty()) if ns.pretty else (lambda v: v.to_text())
    if what == "f":
        i, j = ns.i or 1, ns.j or 1
        s = f_struct(params(case).s_param, i, j, N)
        lines.append(f"f_{{{i},{j}}}(zeta), {case}, s = {params(case).s_param.pretty()}")
        for m in range(0, N + 1):
            lines.append(f"{m}\t{fmt(s.coeff(m))}")
    elif what == "kernel":
        k, l = ns.i or 1, ns.j or 1
        K = kernel(case, k, l)
        s = expand_rational(K.rational(), "zero", N)
        lines.append(f"f_11 phi_(L{k},L{l}) = {K.describe()}, {case}")
        for m in range(0, N + 1):
            lines.append(f"{m}\t{fmt(s.coeff(m))}")
    elif what == "phi":
        V, W = Vertex.parse(ns.v or "L1"), Vertex.parse(ns.w or "L1")
        c = phi(params(case), V, W)
        lines.append(f"phi_({V},{W}), {case}, zero mode {c.zero_mode and (c.zero_mode[0], c.zero_mode[1].pretty())}")
        s = c.series(N)
        for m in range(0, N + 1):
            lines.append(f"{m}\t{fmt(s.coeff(m))}")
    elif what == "delta":
        i = ns.i if ns.i is not None else 1
        s = expand_rational(delta_rational(i), "zero", N)
        lines.append(f"Delta_{i}(zeta)")
        for m in range(0, N + 1):
            lines.append(f"{m}\t{fmt(s.coeff(m))}")
    elif what == "T":
        i = ns.i if ns.i is not None else 1
        T = build_T(case, i, ns.construction)
        lines.append(f"T_{i}(z), {case}")
        for mono, w in T:
            lines.append(f"{fmt(w)}\t{mono.to_text()}")
    else:
        raise ConfigError(f"unknown expansion target {what!r}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Exact checks for the free-field W-algebra data.")
    p.add_argument("--version", action="version", version=f"wqt {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, case_default="all"):
        sp.add_argument("--case", default=case_default, choices=list(CASES) + ["all"])
        sp.add_argument("--order", "-N", type=int, default=None, help="series order / mode range")
        sp.add_argument("--degree", type=int, default=3, help="maximal current degree")
        sp.add_argument("--cache-dir", default=None, help=f"cache directory (overrides ${ENV_CACHE})")
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--output", "-o", default=None, help="report file")
        sp.add_argument("--format", choices=["text", "json"], default=None,
                        help="report format (default from the output suffix, else text)")
        sp.add_argument("--jobs", "-j", type=int, default=1)
        sp.add_argument("--quiet", "-q", action="store_true")

    for name in SUBCOMMANDS:
        if name == "expand":
            continue
        sp = sub.add_parser(name)
        common(sp, "1" if name == "case1-truncation" else "all")
        if name in ("quadratic", "fusion-T", "exchange-T", "all"):
            sp.add_argument("--i", type=int, default=None)
            sp.add_argument("--j", type=int, default=None)
        if name == "fusion-T":
            sp.add_argument("--sign", choices=["+", "-"], default=None)
        if name in ("quadratic", "all"):
            sp.add_argument("--construction", choices=["ordered", "literal", "fusion"], default="ordered",
                            help="Case 3 current construction")
            bf = sp.add_mutually_exclusive_group()
            bf.add_argument("--brute-force", dest="brute_force", action="store_true", default=None)
            bf.add_argument("--no-brute-force", dest="brute_force", action="store_false")
        if name in ("classical", "all"):
            sp.add_argument("--q0", type=float, default=4.0)
            sp.add_argument("--betas", default="1e-2,1e-3,1e-4")
            sp.add_argument("--precision", type=int, default=40)
            sp.add_argument("--convention", choices=["q=x^2r", "q=x^-2r"], default="q=x^2r")
        if name == "all":
            sp.add_argument("--claims", default=",".join(CLAIM_GROUPS),
                            help="comma-separated claim groups")
    ex = sub.add_parser("expand", help="print a series or current")
    ex.add_argument("what", choices=["f", "kernel", "phi", "delta", "T"])
    ex.add_argument("--case", default="2", choices=list(CASES) + ["all"])
    ex.add_argument("--order", "-N", type=int, default=4)
    ex.add_argument("--i", type=int, default=None)
    ex.add_argument("--j", type=int, default=None)
    ex.add_argument("--v", default=None, help="first vertex for phi, e.g. L1, S2, St1")
    ex.add_argument("--w", default=None, help="second vertex for phi")
    ex.add_argument("--construction", choices=["ordered", "literal", "fusion"], default="ordered")
    ex.add_argument("--pretty", action="store_true", help="human-readable coefficients")
    return p


def config_from_args(ns, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    cache = None
    if not ns.no_cache:
        raw = ns.cache_dir or environ.get(ENV_CACHE) or str(Path.home() / ".cache" / "wqt")
        cache = Path(raw)
    fmt = ns.format or ("json" if ns.output and str(ns.output).endswith(".json") else "text")
    kw = dict(command=ns.command, cases=CASES if ns.case == "all" else (ns.case,), order=ns.order,
              degree=ns.degree, cache_dir=cache, output=Path(ns.output) if ns.output else None, fmt=fmt,
              jobs=ns.jobs)
    for name in ("i", "j", "construction", "brute_force", "q0", "precision", "convention"):
        if hasattr(ns, name):
            kw[name] = getattr(ns, name)
    if getattr(ns, "sign", None):
        kw["sign"] = 1 if ns.sign == "+" else -1
    if hasattr(ns, "betas"):
        try:
            kw["betas"] = tuple(float(b) for b in ns.betas.split(",") if b.strip())
        except ValueError:
            raise ConfigError(f"bad --betas {ns.betas!r}") from None
    if hasattr(ns, "claims"):
        kw["claims"] = tuple(c.strip() for c in ns.claims.split(",") if c.strip())
    return RunConfig(**kw)


def run(argv: Optional[Sequence[str]] = None, environ=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if ns.command == "expand":
            stdout.write(run_expand(ns))
            return 0
        cfg = config_from_args(ns, environ)
        if cfg.command == "classical":
            from .classical import PBParams
            PBParams(q0=cfg.q0, betas=cfg.betas, precision=cfg.precision, convention=cfg.convention)
        jobs = build_jobs(cfg)
        try:
            results = run_jobs(jobs, Cache(cfg.cache_dir), cfg.jobs)
        except OSError as exc:
            raise ConfigError(f"cache: {exc}") from None
    except (ConfigError, ValueError) as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return 2
    reports = [r for r, _ in results]
    timings = [t for _, t in results]
    doc = render_json(reports, timings) if cfg.fmt == "json" else render_text(reports, timings)
    if cfg.output is not None:
        atomic_write(cfg.output, doc)
    failed = [r for r in reports if not r.passed]
    if not ns.quiet:
        if cfg.output is None:
            stdout.write(doc)
        else:
            for r in reports:
                stdout.write(f"{r.status.upper():4}  {r.key}\n")
            stdout.write(f"{len(reports) - len(failed)}/{len(reports)} passed; report written to {cfg.output}\n")
    return 1 if failed else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
