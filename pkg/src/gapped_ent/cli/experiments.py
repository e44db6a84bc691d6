"""Experiment registry: parameter schemas and runners.

Every runner receives validated parameters and a seed, and returns an
``ExperimentOutput`` with a fixed column list, one row per sweep point, the
named pass/fail assertions and a few extremal values for the summary.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import channels, entanglement, fcs, qlinalg
from ..errors import ConfigInvalid
from ..gapped import filtering, lemmas, lieb_robinson, models, regions

PLATEAU_TOL = 1e-6
EOF_SLACK = 2e-3


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator; ``stream`` separates independent uses of one seed."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, stream]))


@dataclass(frozen=True)
class Param:
    kind: str  # int, float, str, bool, ints, floats
    default: Any
    help: str
    nullable: bool = False
    check: Callable[[Any], bool] | None = None
    check_text: str = ""

    def coerce(self, name: str, value: Any) -> Any:
        if value is None:
            if self.nullable:
                return None
            raise ConfigInvalid(f"parameter {name!r} may not be null")
        try:
            out = _COERCE[self.kind](value)
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"parameter {name!r}: expected {self.kind}, got {value!r}") from exc
        if self.check is not None and not self.check(out):
            raise ConfigInvalid(f"parameter {name!r}={value!r} violates {self.check_text}")
        return out

    def describe(self) -> dict:
        return {"type": self.kind, "default": self.default, "nullable": self.nullable, "help": self.help}


def _strict_int(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
        if isinstance(v, float) and v.is_integer():
            return int(v)
        raise TypeError(v)
    return int(v)


def _strict_float(v: Any) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float, np.integer, np.floating)):
        raise TypeError(v)
    return float(v)


def _strict_bool(v: Any) -> bool:
    if not isinstance(v, bool):
        raise TypeError(v)
    return v


def _strict_str(v: Any) -> str:
    if not isinstance(v, str):
        raise TypeError(v)
    return v


def _list_of(conv):
    def inner(v):
        if not isinstance(v, (list, tuple)) or not v:
            raise TypeError(v)
        return [conv(x) for x in v]

    return inner


_COERCE = {
    "int": _strict_int,
    "float": _strict_float,
    "bool": _strict_bool,
    "str": _strict_str,
    "ints": _list_of(_strict_int),
    "floats": _list_of(_strict_float),
}


def _positive(x) -> bool:
    return x > 0


def _all_positive(xs) -> bool:
    return all(x > 0 for x in xs)


@dataclass
class ExperimentOutput:
    columns: list[str]
    rows: list[dict]
    assertions: dict[str, bool]
    extremes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    params: dict[str, Param]
    runner: Callable[[dict, int], ExperimentOutput]

    def validate(self, params: dict | None) -> dict:
        params = dict(params or {})
        unknown = sorted(set(params) - set(self.params))
        if unknown:
            raise ConfigInvalid(f"unknown parameters for {self.name}: {unknown}")
        return {k: p.coerce(k, params.get(k, p.default)) for k, p in self.params.items()}

    def describe(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "params": {k: p.describe() for k, p in self.params.items()},
        }


# ---------------------------------------------------------------- fcs


def _run_fcs_convergence(p: dict, seed: int) -> ExperimentOutput:
    spec = fcs.builtin_specs(p["spec"])
    opts = entanglement.EofOptions(restarts=p["restarts"], max_steps=p["max_steps"], seed=seed)
    rows, slope = entanglement.convergence_experiment(spec, p["n_max"], opts)
    gaps = {r.n: r.gap for r in rows}
    out_rows = [
        {"n": r.n, "eof_chain": r.eof_chain, "eof_ab": r.eof_ab, "gap": r.gap, "slope_fit": slope} for r in rows
    ]
    later = [gaps[n] for n in sorted(gaps) if n >= 3]
    n_max = p["n_max"]
    decay_ok = True
    if n_max - 2 in gaps and gaps[n_max - 2] > PLATEAU_TOL:
        decay_ok = gaps[n_max] <= 0.6 * gaps[n_max - 2]
    assertions = {
        "lower_bound": all(g >= -EOF_SLACK for g in gaps.values()),
        "non_increasing_from_n3": all(b <= a + EOF_SLACK for a, b in zip(later, later[1:])),
        "gap_decays_over_two_sites": decay_ok,
    }
    td = fcs.transfer(spec)
    extremes = {"lam": td.lam, "c": td.c, "slope_fit": slope, "ln_lam": float(np.log(td.lam)) if td.lam > 0 else None}
    return ExperimentOutput(["n", "eof_chain", "eof_ab", "gap", "slope_fit"], out_rows, assertions, extremes)


def _run_fcs_distant(p: dict, seed: int) -> ExperimentOutput:
    spec = fcs.builtin_specs(p["spec"])
    td = fcs.transfer(spec)
    p_range = range(p["p_min"], p["p_max"] + 1)
    rows = entanglement.distant_decay_experiment(spec, p["n"], p_range)
    out_rows, ratios_ok = [], True
    for k, r in enumerate(rows):
        ratio = None
        if k + 1 < len(rows) and r.trace_distance > 1e-8:
            ratio = rows[k + 1].trace_distance / r.trace_distance
            ratios_ok &= ratio <= td.lam + 0.15
        out_rows.append(
            {
                "p": r.p,
                "trace_distance": r.trace_distance,
                "half_trace_distance": r.half_trace_distance,
                "bound": r.bound,
                "within_bound": r.within_bound,
                "ratio_next": ratio,
            }
        )
    dists = [r.trace_distance for r in rows]
    assertions = {
        "ratio_below_lam_plus_0.15": bool(ratios_ok),
        "non_increasing": all(b <= a + 1e-12 for a, b in zip(dists, dists[1:])),
        "within_c_lam_bound": all(r.within_bound for r in rows),
    }
    cols = ["p", "trace_distance", "half_trace_distance", "bound", "within_bound", "ratio_next"]
    return ExperimentOutput(cols, out_rows, assertions, {"lam": td.lam, "c": td.c})


# ---------------------------------------------------------------- channels


def _random_pairs(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, d * d)) + 1j * rng.standard_normal((count, d * d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _run_channel_mult(p: dict, seed: int) -> ExperimentOutput:
    rows, stream = [], 0
    for d in p["dims"]:
        for lam in p["lambdas"]:
            ch = channels.DwhChannel(lam, d)
            rng = make_rng(seed, stream)
            stream += 1
            psis = _random_pairs(d, p["samples"], rng)
            single = channels.max_output_2norm_sq(ch)
            tensor = channels.tensor_output_2norm_sq_batch(ch, psis)
            gaps = single**2 - tensor
            direct = [
                float(np.sum(np.abs(channels.tensor_output(ch, psi)) ** 2)) for psi in psis[: p["direct_samples"]]
            ]
            closed_dev = float(np.max(np.abs(np.array(direct) - tensor[: len(direct)])))
            attained = float(np.sum(np.abs(channels.apply(ch, _pure(channels.max_norm_state(d)))) ** 2))
            best, _ = channels.mult_search(ch, p["restarts"], p["steps"], rng)
            rows.append(
                {
                    "d": d,
                    "lam": lam,
                    "min_gap": float(gaps.min()),
                    "closed_vs_direct": closed_dev,
                    "max_norm_attained_dev": abs(attained - single),
                    "search_best": best,
                    "ceiling": single**2,
                }
            )
    assertions = {
        "closed_form_matches_direct": all(r["closed_vs_direct"] <= 1e-10 for r in rows),
        "max_norm_attained": all(r["max_norm_attained_dev"] <= 1e-12 for r in rows),
        "gap_nonnegative": all(r["min_gap"] >= -1e-10 for r in rows),
        "search_below_ceiling": all(r["search_best"] <= r["ceiling"] + 1e-8 for r in rows),
    }
    extremes = {"min_gap": min(r["min_gap"] for r in rows), "max_closed_vs_direct": max(r["closed_vs_direct"] for r in rows)}
    cols = ["d", "lam", "min_gap", "closed_vs_direct", "max_norm_attained_dev", "search_best", "ceiling"]
    return ExperimentOutput(cols, rows, assertions, extremes)


def _pure(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def conjugate_pair_basis(d: int) -> np.ndarray:
    """(|0> + i|1>)/sqrt 2 and (|0> - i|1>)/sqrt 2 as columns, padded with the standard basis."""
    e = np.eye(d, dtype=complex)
    e[:, 0] = (np.eye(d)[0] + 1j * np.eye(d)[1]) / np.sqrt(2)
    e[:, 1] = (np.eye(d)[0] - 1j * np.eye(d)[1]) / np.sqrt(2)
    return e


def _run_channel_ep(p: dict, seed: int) -> ExperimentOutput:
    d, lam = p["d"], p["lam"]
    ch = channels.DwhChannel(lam, d)
    rng = make_rng(seed)
    bases = [("standard", np.eye(d, dtype=complex)), ("conjugate_pair", conjugate_pair_basis(d))]
    bases += [(f"random_{k}", qlinalg.random_unitary(d, rng)) for k in range(p["random_bases"])]
    rows = []
    for label, basis in bases:
        ok, min_entry, (i, j, k, l) = channels.ep_check(ch, basis)
        rows.append({"basis": label, "satisfied": ok, "min_entry": min_entry, "i": i, "j": j, "k": k, "l": l})
    by_label = {r["basis"]: r for r in rows}
    if d >= 3 and 0 < lam < 1:
        assertions = {
            "standard_fails": not by_label["standard"]["satisfied"] and by_label["standard"]["min_entry"] < -1e-12,
            "random_bases_fail": all(
                not r["satisfied"] and r["min_entry"] < -1e-12 for r in rows if r["basis"].startswith("random_")
            ),
        }
    elif d == 2:
        assertions = {"conjugate_pair_satisfied": by_label["conjugate_pair"]["satisfied"]}
    else:
        assertions = {"all_satisfied": all(r["satisfied"] for r in rows)}
    cols = ["basis", "satisfied", "min_entry", "i", "j", "k", "l"]
    return ExperimentOutput(cols, rows, assertions, {"min_entry": min(r["min_entry"] for r in rows)})


# ---------------------------------------------------------------- gapped


def _run_area_law(p: dict, seed: int) -> ExperimentOutput:
    rows, steps = [], []
    lo, hi = p["cut_min"], p["cut_max"]
    if not 2 <= lo <= hi <= p["n"] - 1:
        raise ConfigInvalid("need 2 <= cut_min <= cut_max <= n - 1")
    for h in p["fields"]:
        model = models.build_model(p["model"], p["n"], {"h": h})
        profile = dict(models.entropy_profile(models.diagonalize(model), model))
        worst = 0.0
        for m_cut, s in sorted(profile.items()):
            delta = s - profile[m_cut - 1] if m_cut - 1 in profile else None
            interior = delta is not None and lo <= m_cut <= hi
            if interior:
                worst = max(worst, abs(delta))
            rows.append({"h": h, "M": m_cut, "entropy": s, "delta": delta, "interior": interior})
        steps.append(worst)
    assertions = {"first_field_saturates": steps[0] < 0.05}
    if len(steps) > 1:
        assertions["second_field_at_least_twice"] = steps[1] >= 2 * steps[0]
    extremes = {f"max_interior_step_h{h:g}": s for h, s in zip(p["fields"], steps)}
    return ExperimentOutput(["h", "M", "entropy", "delta", "interior"], rows, assertions, extremes)


GS_COLUMNS = [
    "kind",
    "ell",
    "label",
    "alpha",
    "value",
    "bound",
    "ok",
    "cutoff",
    "overlap_pa",
    "pb_norm",
    "rank_pa",
    "rank_pe",
    "quadrature_change",
    "surrogate_residual",
]


def _filter_rows(p: dict) -> tuple[list[dict], dict]:
    model = models.build_model(p["model"], p["filter_n"], {"h": p["h"]})
    spec = models.diagonalize(model)
    consts = filtering.bound_constants(model.J, spec.gap)
    region = list(range(p["filter_n"] // 2))
    rows, bound_ok, proj_ok = [], True, True
    for ell in (1, 2):
        split = regions.region_split(model.n_sites, region, ell)
        hs = regions.hamiltonian_split(model, split, spec.hamiltonian)
        centre = consts.alpha(ell)
        for alpha in np.geomspace(centre / np.sqrt(10), centre * np.sqrt(10), p["alpha_points"]):
            for label, h_x in hs.parts.items():
                fb = filtering.filtered_energy_bound(spec, h_x, alpha)
                bound_ok &= fb.holds
                rows.append({"kind": "filter", "ell": ell, "label": label, "alpha": alpha, "value": fb.lhs,
                             "bound": fb.rhs, "ok": fb.holds})
            by_matrix, by_spectrum, bound = filtering.approx_projector_error(spec, alpha)
            ok = abs(by_matrix - by_spectrum) <= 1e-10 and by_matrix <= bound + 1e-10
            proj_ok &= ok
            rows.append({"kind": "projector", "ell": ell, "label": "P_tilde", "alpha": alpha, "value": by_matrix,
                         "bound": bound, "ok": ok})
    return rows, {"filter_bound": bool(bound_ok), "projector_bound": bool(proj_ok)}


def _run_gs_approx(p: dict, seed: int) -> ExperimentOutput:
    rows, assertions = [], {}
    if p["filter_sweep"]:
        filter_rows, filter_flags = _filter_rows(p)
        rows += filter_rows
        assertions.update(filter_flags)
    model = models.build_model(p["model"], p["n"], {"h": p["h"]})
    spec = models.diagonalize(model)
    first, last = p["region"]
    region = list(range(first, last + 1))
    errors, overlap_ok, structure_ok = [], True, True
    for ell in p["ells"]:
        split = regions.region_split(model.n_sites, region, ell)
        res = filtering.gs_projector_approx(model, split, p["alpha"], p["cutoff"], p["nodes"], spec)
        diag = res.diagnostics
        errors.append(res.error)
        ok_overlap = res.overlap_pa >= diag["overlap_bound"] - 1e-12
        if p["cutoff"] is None:
            overlap_ok &= ok_overlap
        structure_ok &= (
            res.pb_norm <= 1 + 1e-10
            and np.abs(res.P_A @ res.P_A - res.P_A).max() <= 1e-9
            and np.abs(res.P_E @ res.P_E - res.P_E).max() <= 1e-9
        )
        rows.append(
            {
                "kind": "approx",
                "ell": ell,
                "label": "P_B P_A P_E",
                "alpha": diag["alpha"],
                "value": res.error,
                "bound": diag["overlap_bound"],
                "ok": ok_overlap,
                "cutoff": diag["cutoff"],
                "overlap_pa": res.overlap_pa,
                "pb_norm": res.pb_norm,
                "rank_pa": diag["rank_pa"],
                "rank_pe": diag["rank_pe"],
                "quadrature_change": diag["quadrature_change"],
                "surrogate_residual": diag["surrogate_residual"],
            }
        )
    assertions["error_non_increasing"] = all(b <= a + PLATEAU_TOL for a, b in zip(errors, errors[1:]))
    assertions["error_below_one_at_largest_ell"] = errors[-1] < 1
    assertions["overlap_at_least_bound"] = bool(overlap_ok)
    assertions["projector_structure"] = bool(structure_ok)
    extremes = {"errors": errors, "gap": spec.gap, "J": model.J}
    return ExperimentOutput(GS_COLUMNS, rows, assertions, extremes)


def _run_lr_probe(p: dict, seed: int) -> ExperimentOutput:
    model = models.build_model(p["model"], p["n"], {"h": p["h"]})
    spec = models.diagonalize(model)
    x = p["site"]
    targets = [x + k for k in range(1, p["max_distance"] + 1)]
    if targets[-1] >= p["n"]:
        raise ConfigInvalid("site + max_distance must stay on the chain")
    t_grid = np.linspace(0.0, p["t_max"], p["t_points"])
    z = models.PAULI_Z
    res = lieb_robinson.lr_probe(model, spec, z, x, z, targets, t_grid)
    rows = [
        {"distance": r.distance, "t": r.t, "norm": r.norm, "bound": r.bound, "in_window": r.in_window,
         "arrival": res.arrival_times[r.distance]}
        for r in res.rows
    ]
    assertions = {
        "arrival_monotone": res.arrival_monotone,
        "velocity_below_4J": bool(np.isfinite(res.velocity_fit) and res.velocity_fit <= res.velocity_bound),
        "bound_holds_in_window": res.bound_holds,
    }
    extremes = {"velocity_fit": res.velocity_fit, "velocity_bound": res.velocity_bound,
                "arrival_times": {str(k): v for k, v in sorted(res.arrival_times.items())}}
    return ExperimentOutput(["distance", "t", "norm", "bound", "in_window", "arrival"], rows, assertions, extremes)


# ---------------------------------------------------------------- lemmas

ENTROPY_SCHEDULES = (((2, 4, 8, 16), 0.5), ((3, 6, 12, 24), 0.3), ((2, 3, 5, 9, 17), 0.6))


def admissible_sample(schedule, c: float, rng: np.random.Generator, max_tries: int = 10000) -> np.ndarray:
    """Rejection-sample a distribution on schedule[-1] entries meeting the tail constraint."""
    size = schedule[-1]
    for _ in range(max_tries):
        decay = rng.uniform(0.05, 1.5)
        sig = rng.uniform(0.0, 1.0, size) * np.exp(-decay * np.arange(size))
        sig = np.sort(sig / sig.sum())[::-1]
        tails = np.concatenate([np.cumsum(sig[::-1])[::-1], [0.0]])
        if all(tails[s] <= c**n for n, s in enumerate(schedule, start=1)):
            return sig
    raise RuntimeError("rejection sampler found no admissible distribution")


def _close_pair(dim: int, rng: np.random.Generator, eps: float) -> tuple[np.ndarray, np.ndarray]:
    rho = qlinalg.random_density(dim, rng)
    other = qlinalg.random_density(dim, rng)
    return rho, (1 - eps) * rho + eps * other


def _run_lemma_suite(p: dict, seed: int) -> ExperimentOutput:
    rng = make_rng(seed)
    rows = []
    for d in range(1, p["d_max"] + 1):
        for n in range(1, p["n_max"] + 1):
            rec, brute, bound = lemmas.sphere_count(n, d), lemmas.lattice_sphere_count(n, d), lemmas.sphere_bound(n, d)
            rows.append({"check": "sphere", "case": f"n={n},d={d}", "value": rec, "reference": brute,
                         "bound": bound, "ok": rec == brute and rec <= bound})
    for k, (schedule, c) in enumerate(ENTROPY_SCHEDULES):
        ratio = max(b / a for a, b in zip(schedule, schedule[1:]))
        ext = lemmas.extremal_distribution(schedule, c)
        s_val, bound = lemmas.entropy_bound_eval(ext, schedule, c, ratio)
        closed = lemmas.extremal_entropy(schedule, c)
        rows.append({"check": "extremal", "case": f"schedule{k}", "value": s_val, "reference": closed,
                     "bound": bound, "ok": abs(s_val - closed) <= 1e-9 and s_val <= bound})
    for k in range(p["entropy_samples"]):
        schedule, c = ENTROPY_SCHEDULES[k % len(ENTROPY_SCHEDULES)]
        ratio = max(b / a for a, b in zip(schedule, schedule[1:]))
        sig = admissible_sample(schedule, c, rng)
        s_val, bound = lemmas.entropy_bound_eval(sig, schedule, c, ratio)
        rows.append({"check": "entropy", "case": f"sample{k}", "value": s_val, "reference": None,
                     "bound": bound, "ok": s_val <= bound})
    for k in range(p["fannes_samples"]):
        rho, sigma = _close_pair(p["fannes_dim"], rng, p["fannes_eps"])
        lhs, rhs, ok = entanglement.fannes_gap(rho, sigma)
        rows.append({"check": "fannes", "case": f"pair{k}", "value": lhs, "reference": None, "bound": rhs, "ok": ok})
    checks = sorted({r["check"] for r in rows})
    assertions = {f"{c}_holds": all(r["ok"] for r in rows if r["check"] == c) for c in checks}
    return ExperimentOutput(["check", "case", "value", "reference", "bound", "ok"], rows, assertions, {})


def _two_ints(v) -> bool:
    return len(v) == 2 and 0 <= v[0] <= v[1]


REGISTRY: dict[str, Experiment] = {
    e.name: e
    for e in [
        Experiment(
            "fcs-convergence",
            "EoF of site 1 against sites 2..n converging to the memory-state EoF (finitely correlated states)",
            {
                "spec": Param("str", "aklt", "builtin FCS name, e.g. aklt or random(2,2,seed=7)"),
                "n_max": Param("int", 6, "largest block length", check=lambda x: x >= 2, check_text=">= 2"),
                "restarts": Param("int", 32, "optimizer restarts", check=_positive, check_text="> 0"),
                "max_steps": Param("int", 5000, "optimizer step budget", check=_positive, check_text="> 0"),
            },
            _run_fcs_convergence,
        ),
        Experiment(
            "fcs-distant",
            "Trace distance of rho_{1,[p,n]} from the product of its marginals, against c lam^(p-2)",
            {
                "spec": Param("str", "aklt", "builtin FCS name"),
                "n": Param("int", 7, "chain length", check=lambda x: x >= 3, check_text=">= 3"),
                "p_min": Param("int", 3, "first p", check=lambda x: x >= 2, check_text=">= 2"),
                "p_max": Param("int", 6, "last p", check=lambda x: x >= 2, check_text=">= 2"),
            },
            _run_fcs_distant,
        ),
        Experiment(
            "channel-mult",
            "Output 2-norm multiplicativity of depolarized Werner-Holevo channels: sampling and search",
            {
                "dims": Param("ints", [2, 3], "local dimensions", check=lambda v: all(x >= 2 for x in v),
                              check_text="all >= 2"),
                "lambdas": Param("floats", [round(0.1 * k, 1) for k in range(11)], "channel parameters",
                                 check=lambda v: all(0 <= x <= 1 for x in v), check_text="all in [0, 1]"),
                "samples": Param("int", 10000, "Haar-random inputs per grid point", check=_positive,
                                 check_text="> 0"),
                "direct_samples": Param("int", 500, "inputs also checked against the direct expansion",
                                        check=_positive, check_text="> 0"),
                "restarts": Param("int", 20, "hill-climbing restarts", check=_positive, check_text="> 0"),
                "steps": Param("int", 3000, "hill-climbing steps", check=_positive, check_text="> 0"),
            },
            _run_channel_mult,
        ),
        Experiment(
            "channel-ep",
            "Entrywise-positivity condition of the depolarized Werner-Holevo channel in several bases",
            {
                "d": Param("int", 3, "dimension", check=lambda x: x >= 2, check_text=">= 2"),
                "lam": Param("float", 0.5, "channel parameter", check=lambda x: 0 <= x <= 1, check_text="in [0, 1]"),
                "random_bases": Param("int", 100, "Haar-random bases", check=lambda x: x >= 0, check_text=">= 0"),
            },
            _run_channel_ep,
        ),
        Experiment(
            "area-law",
            "Ground-state entanglement entropy across every cut of an open chain",
            {
                "model": Param("str", "tfim", "model name"),
                "n": Param("int", 12, "sites", check=lambda x: x >= 3, check_text=">= 3"),
                "fields": Param("floats", [2.0, 1.0], "field values; the first is expected gapped"),
                "cut_min": Param("int", 4, "first interior cut"),
                "cut_max": Param("int", 8, "last interior cut"),
            },
            _run_area_law,
        ),
        Experiment(
            "gs-approx",
            "Local approximation P_B P_A P_E of the ground-state projector, with Gaussian-filter bounds",
            {
                "model": Param("str", "tfim", "model name"),
                "h": Param("float", 2.0, "field"),
                "n": Param("int", 12, "sites", check=lambda x: x >= 3, check_text=">= 3"),
                "region": Param("ints", [0, 5], "first and last site of A (zero-based, inclusive)",
                                check=_two_ints, check_text="[first, last] with 0 <= first <= last"),
                "ells": Param("ints", [1, 2, 3], "boundary widths", check=_all_positive, check_text="all > 0"),
                "alpha": Param("float", None, "filter width; null for gap^2 xi' / 4 ell", nullable=True,
                               check=_positive, check_text="> 0"),
                "cutoff": Param("float", None, "spectral cutoff; null for the computed default", nullable=True,
                                check=_positive, check_text="> 0"),
                "nodes": Param("int", 80, "Gauss-Hermite nodes", check=_positive, check_text="> 0"),
                "filter_sweep": Param("bool", True, "also check filter bounds on a smaller chain"),
                "filter_n": Param("int", 8, "sites for the filter sweep", check=lambda x: x >= 3, check_text=">= 3"),
                "alpha_points": Param("int", 5, "alpha values across one decade", check=_positive,
                                      check_text="> 0"),
            },
            _run_gs_approx,
        ),
        Experiment(
            "lr-probe",
            "Commutator growth ||[tau_t(Z_x), Z_y]|| and the Lieb-Robinson bound",
            {
                "model": Param("str", "tfim", "model name"),
                "h": Param("float", 1.0, "field"),
                "n": Param("int", 10, "sites", check=lambda x: x >= 2, check_text=">= 2"),
                "site": Param("int", 0, "site of A", check=lambda x: x >= 0, check_text=">= 0"),
                "max_distance": Param("int", 6, "largest |x - y|", check=_positive, check_text="> 0"),
                "t_max": Param("float", 3.0, "largest time", check=_positive, check_text="> 0"),
                "t_points": Param("int", 31, "time grid points", check=lambda x: x >= 2, check_text=">= 2"),
            },
            _run_lr_probe,
        ),
        Experiment(
            "lemma-suite",
            "Lattice sphere counts, the tail-constrained entropy bound and Fannes continuity",
            {
                "n_max": Param("int", 6, "largest sphere radius", check=_positive, check_text="> 0"),
                "d_max": Param("int", 4, "largest lattice dimension", check=_positive, check_text="> 0"),
                "entropy_samples": Param("int", 200, "admissible distributions", check=lambda x: x >= 0,
                                         check_text=">= 0"),
                "fannes_samples": Param("int", 200, "close density pairs", check=lambda x: x >= 0,
                                        check_text=">= 0"),
                "fannes_dim": Param("int", 4, "dimension of the pairs", check=lambda x: x >= 2, check_text=">= 2"),
                "fannes_eps": Param("float", 0.05, "mixing weight of the perturbation",
                                    check=lambda x: 0 < x <= 0.15, check_text="in (0, 0.15]"),
            },
            _run_lemma_suite,
        ),
    ]
}


def get_experiment(name: str) -> Experiment:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigInvalid(f"unknown experiment {name!r}; known: {sorted(REGISTRY)}") from None
