"""Command dispatch.

Every command is a handler taking the run configuration and returning an
:class:`_Outcome`; :func:`dispatch` wraps it into a :class:`ReportEnvelope`.
"""

from __future__ import annotations

import hashlib
import json
import time
from collections.abc import Callable
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import mpmath
from rich.console import Console

from campana_cli.config.exporter import ReportEnvelope
from campana_cli.config.settings import RunConfig
from campana_cli.core.fanfile import load_instance
from campana_cli.core.models import OrbifoldInstance
from campana_cli.core.rationals import format_fraction, fraction_payload, to_fraction
from campana_cli.errors import (
    ConfigError,
    FanFormatError,
    InconsistentResultError,
    InvalidSystemError,
)

console = Console(stderr=True)


@dataclass
class _Outcome:
    payload: dict[str, Any]
    warnings: list[str] = field(default_factory=list)
    rows: Optional[list[dict[str, Any]]] = None
    columns: Optional[list[str]] = None


Handler = Callable[[RunConfig, Optional[OrbifoldInstance], bool], _Outcome]


def _number(value: Any) -> Any:
    """JSON form of exact and high-precision numbers."""
    if isinstance(value, Fraction):
        return fraction_payload(value)
    if isinstance(value, mpmath.mpf):
        return float(value)
    return value


def _option(config: RunConfig, name: str, default: Any = None) -> Any:
    return config.options.get(name, default)


def _int_list(value: Any, name: str) -> list[int]:
    values = value if isinstance(value, list) else [value]
    try:
        return [int(v) for v in values]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"option {name!r} must be an integer or a list of integers") from e


def _head_bound(config: RunConfig) -> int:
    """Bound for B-independent summaries: the last bound, at least 3."""
    return max(config.bounds[-1], 3) if config.bounds else 3


def _first_bound(config: RunConfig, option: str) -> int:
    if not config.bounds:
        raise ConfigError(f"option {option!r} needs at least one bound")
    return config.bounds[0]


def _require_instance(instance: Optional[OrbifoldInstance], command: str) -> OrbifoldInstance:
    if instance is None:
        raise ConfigError(f"command '{command}' needs a fan")
    return instance


# Fan and polytope commands


def _run_validate(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.validation.validator import print_validation_result, validate_fan

    inst = _require_instance(instance, config.command)
    report = validate_fan(inst.fan, strict=False)
    print_validation_result(report, verbose=verbose)
    if not report.valid:
        validate_fan(inst.fan)
    payload = asdict(report)
    payload.pop("warnings")
    return _Outcome(payload, list(report.warnings))


def _run_lp(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.polytope.toric import (
        build_tilde_P,
        dual_exponent_a,
        exponents_a_b,
        local_dual_exponent_a,
    )

    inst = _require_instance(instance, config.command)
    P = build_tilde_P(inst)
    exps = exponents_a_b(inst)
    sol = exps.lp
    dual = dual_exponent_a(inst)
    local = {}
    for sigma in inst.fan.max_cones:
        value = local_dual_exponent_a(inst, sigma).a
        if value != exps.a:
            raise InconsistentResultError(
                f"single-cone dual program at {sigma} gives {value}, expected {exps.a}"
            )
        local[_cone_label(sigma)] = format_fraction(value)
    y, z = sol.dual_witness
    payload = {
        "polytope": {
            "ambient_dim": P.ambient_dim,
            "inequalities": [
                {"a": [format_fraction(v) for v in a], "b": format_fraction(b)}
                for a, b in P.inequalities
            ],
        },
        "a": fraction_payload(exps.a),
        "b": exps.b,
        "k": exps.k,
        "witness_vertex": [format_fraction(v) for v in sol.witness_vertex],
        "optimal_face_dim": sol.optimal_face_dim,
        "face_vertices": [[format_fraction(v) for v in vert] for vert in sol.face_vertices],
        "dual_witness": {
            "inequalities": [format_fraction(v) for v in y],
            "equalities": [format_fraction(v) for v in z],
        },
        "dual_a": fraction_payload(dual.a),
        "dual_multipliers": {
            _cone_label(sigma): format_fraction(v) for sigma, v in dual.multipliers.items()
        },
        "local_dual_a": local,
    }
    return _Outcome(payload)


def _cone_label(sigma: tuple[int, ...]) -> str:
    return "{" + ",".join(str(i + 1) for i in sigma) + "}"


def _run_alpha(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.polytope.toric import alpha_L, alpha_L_per_cone, closed_form_constant

    inst = _require_instance(instance, config.command)
    per_cone = alpha_L_per_cone(inst)
    value = alpha_L(inst)
    closed = closed_form_constant(inst)
    payload = {
        "alpha_L": fraction_payload(value),
        "per_cone": {_cone_label(s): format_fraction(v) for s, v in per_cone.items()},
        "closed_form_c_P": None if closed is None else fraction_payload(closed),
    }
    return _Outcome(payload)


def _run_assumption(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.polytope.assumption import check_assumption_polytopes

    inst = _require_instance(instance, config.command)
    verdict = check_assumption_polytopes(inst, seed=config.seed, verbose=verbose)
    payload = {
        "status": verdict.status,
        "a": fraction_payload(verdict.a),
        "k": verdict.k,
        "s": verdict.s,
        "reasons": verdict.reasons,
        "unresolved": [_cone_label(J) for J in verdict.unresolved],
    }
    return _Outcome(payload, list(verdict.warnings))


def _run_slice(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.polytope.toric import build_tilde_P
    from campana_cli.polytope.volume import monte_carlo_slice_volume, slice_volume_series

    inst = _require_instance(instance, config.command)
    measure = _option(config, "measure", "weighted")
    if measure not in ("weighted", "plain"):
        raise ConfigError(f"option 'measure' must be 'weighted' or 'plain', got {measure!r}")
    weights = inst.varpi if measure == "weighted" else None
    P = build_tilde_P(inst)
    series = slice_volume_series(
        P,
        inst.varpi,
        k_expected=inst.fan.r - 1 if inst.log_anticanonical else None,
        weights=weights,
        instance=inst if measure == "weighted" else None,
        verbose=verbose,
    )
    warnings = list(series.warnings)
    if series.closed_form is not None and series.closed_form != series.leading_coefficient:
        warnings.append(
            f"leading coefficient {series.leading_coefficient} differs from the closed form "
            f"{series.closed_form}"
        )
    rows = [
        {"delta": float(d), "volume": float(v)} for d, v in zip(series.deltas, series.volumes)
    ]
    payload: dict[str, Any] = {
        "measure": measure,
        "optimum": fraction_payload(series.optimum),
        "face_dim": series.face_dim,
        "expected_exponent": series.expected_exponent,
        "fitted_exponent": series.fitted_exponent,
        "fitted_coefficient": series.fitted_coefficient,
        "leading_coefficient": fraction_payload(series.leading_coefficient),
        "closed_form": None if series.closed_form is None else fraction_payload(series.closed_form),
        "deltas": [format_fraction(d) for d in series.deltas],
        "volumes": [format_fraction(v) for v in series.volumes],
        "residuals": series.residuals,
    }
    samples = int(_option(config, "monte_carlo_samples", 0))
    if samples > 0:
        delta = series.deltas[-1]
        axis = next(i for i, v in enumerate(inst.varpi) if v != 0)
        mc = monte_carlo_slice_volume(
            P, inst.varpi, series.optimum - delta, axis, samples=samples, seed=config.seed,
            weights=weights,
        )
        exact = float(series.volumes[-1])
        payload["monte_carlo"] = {
            "delta": format_fraction(delta),
            "estimate": mc.estimate,
            "std_error": mc.std_error,
            "exact": exact,
        }
        if mc.std_error > 0 and abs(mc.estimate - exact) > 3 * mc.std_error:
            warnings.append("Monte Carlo estimate is more than 3 standard errors from the exact volume")
    return _Outcome(payload, warnings, rows, ["delta", "volume"])


# m-full commands


def _run_mfull_count(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.mfull.constants import c_md, normalised_error
    from campana_cli.mfull.numbers import MFullQuery, count_F, count_F_naive

    m = int(_option(config, "m", 2))
    d = int(_option(config, "d", 1))
    naive = bool(_option(config, "naive", False))
    density = c_md(m, d, config.prime_cutoff)
    rows = []
    for B in config.bounds:
        query = MFullQuery(m, B, d)
        value = count_F(query)
        if naive and count_F_naive(query) != value:
            raise InconsistentResultError(f"F_{m}({B}, {d}): stream count differs from valuation scan")
        main = density.value * mpmath.power(B, mpmath.mpf(1) / m)
        rows.append(
            {
                "B": B,
                "F": value,
                "main_term": float(main),
                "normalised_error": normalised_error(m, d, B, config.prime_cutoff),
            }
        )
        if verbose:
            console.print(f"[dim]F_{m}({B}, {d}) = {value}[/]")
    payload = {"m": m, "d": d, "c_md": float(density.value), "rows": rows}
    return _Outcome(payload, list(density.warnings), rows, ["B", "F", "main_term", "normalised_error"])


def _run_mfull_constants(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.mfull.constants import G_m_series, c_md, m_full_constants

    m_values = _int_list(_option(config, "m", [1, 2, 3]), "m")
    d_values = _int_list(_option(config, "d", [1, 2, 3, 6]), "d")
    mu_max = int(_option(config, "mu_max", 12))
    warnings: list[str] = []
    entries = []
    for m in m_values:
        consts = m_full_constants(m, config.prime_cutoff, mu_max=mu_max)
        densities = {}
        for d in d_values:
            dens = c_md(m, d, config.prime_cutoff)
            densities[str(d)] = float(dens.value)
            warnings.extend(dens.warnings)
        entries.append(
            {
                "m": m,
                "C_m": float(consts.C_m),
                "C_m_tail": consts.C_m_tail,
                "kappa_m": format_fraction(consts.kappa_m),
                "K_m_bound": float(consts.K_m_bound),
                "a_coeffs": consts.a_coeffs,
                "G_m_series": G_m_series(m, mu_max) if m >= 2 else [],
                "c_md": densities,
                "prime_cutoff": consts.cutoff,
            }
        )
    return _Outcome({"constants": entries}, warnings)


def _run_mfull_verify(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.mfull.constants import G_m_eval, euler_factor
    from campana_cli.mfull.identities import (
        verify_forced_prime_identity,
        verify_forced_prime_identity_with_divisor,
    )

    m_values = _int_list(_option(config, "m", [2, 3]), "m")
    primes = _int_list(_option(config, "primes", [2, 3, 5]), "primes")
    divisor = int(_option(config, "d", 1))
    checks = []
    for m in m_values:
        for p in primes:
            lhs = mpmath.mpf(1) / p + G_m_eval(m, mpmath.power(p, -mpmath.mpf(1) / m))
            gap = float(abs(lhs - euler_factor(m, p)))
            if gap > 1e-12:
                raise InconsistentResultError(f"local density identity fails for m={m}, p={p}")
            for B in config.bounds:
                ok = verify_forced_prime_identity(m, p, B)
                if divisor > 1 and divisor % p == 0:
                    ok = ok and verify_forced_prime_identity_with_divisor(m, divisor, p, B)
                if not ok:
                    raise InconsistentResultError(f"forced-prime identity fails for m={m}, p={p}, B={B}")
                checks.append({"m": m, "p": p, "B": B, "holds": True})
            if verbose:
                console.print(f"[dim]m={m}, p={p}: identities hold[/]")
    return _Outcome({"d": divisor, "checks": checks})


# Hyperbola commands


def _run_hyperbola_demo(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.hyperbola.boxes import box_decomposition
    from campana_cli.hyperbola.engine import demo_setup, hyperbola_main_term, ratio_series

    preset = _option(config, "preset", "dirichlet")
    f, system = demo_setup(preset, config.prime_cutoff)
    estimate = hyperbola_main_term(f, system, _head_bound(config), seed=config.seed)
    rows = ratio_series(
        f, system, config.bounds, work_cap=config.work_cap, workers=config.workers, verbose=verbose
    )
    payload: dict[str, Any] = {
        "preset": preset,
        "function": f.describe(),
        "estimate": estimate.to_dict(),
        "rows": rows,
    }
    theta = _option(config, "theta")
    if theta is not None:
        first = _first_bound(config, "theta")
        boxes = box_decomposition(
            f,
            system,
            first,
            theta=to_fraction(theta),
            lattice_cap=config.lattice_cap,
            work_cap=config.work_cap,
            verbose=verbose,
        )
        payload["boxes"] = {
            "bound": boxes.bound,
            "theta": format_fraction(boxes.theta),
            "S_minus": boxes.s_minus,
            "S": boxes.s_exact,
            "S_plus": boxes.s_plus,
            "main_minus": boxes.main_minus,
            "main_plus": boxes.main_plus,
        }
    warnings = list(estimate.warnings)
    return _Outcome(payload, warnings, rows, ["B", "exact", "main_term", "ratio"])


def _load_system(path: Path, prime_cutoff: int):
    from campana_cli.hyperbola.boxes import BoxConstraintSystem
    from campana_cli.hyperbola.functions import parse_preset

    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read system file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidSystemError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(data, dict) or "alpha" not in data:
        raise InvalidSystemError(f"{path}: expected an object with key 'alpha'")
    system = BoxConstraintSystem.from_rows(data["alpha"], data.get("b"))
    arity = len(data["alpha"][0]) if data["alpha"] else 0
    f = parse_preset(data.get("f", "unit"), arity, prime_cutoff)
    if "varpi" in data:
        varpi = tuple(to_fraction(v) for v in data["varpi"])
        if varpi != tuple(f.varpi):
            raise InvalidSystemError(
                f"varpi {[format_fraction(v) for v in varpi]} does not match function {f.name}"
            )
    return f, system, data


def _run_hyperbola_estimate(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.hyperbola.engine import exact_S_f, hyperbola_main_term

    source = _option(config, "system")
    if source is None:
        raise ConfigError("hyperbola estimate needs a system file (option 'system')")
    f, system, _ = _load_system(Path(source), config.prime_cutoff)
    exact = bool(_option(config, "exact", False))
    rows = []
    warnings: list[str] = []
    for B in config.bounds:
        est = hyperbola_main_term(f, system, B, seed=config.seed, verbose=verbose)
        row: dict[str, Any] = {"B": B, "main_term": est.main_term, "error_scale": est.error_scale}
        if exact:
            value = exact_S_f(f, system, B, work_cap=config.work_cap, workers=config.workers)
            row["exact"] = value
            row["ratio"] = value / est.main_term if est.main_term else float("nan")
        rows.append(row)
        for w in est.warnings:
            if w not in warnings:
                warnings.append(w)
    head = hyperbola_main_term(f, system, _head_bound(config), seed=config.seed)
    payload = {
        "function": f.describe(),
        "a": fraction_payload(head.a),
        "k": head.k,
        "c_P": fraction_payload(head.c_P),
        "assumption": head.assumption.status,
        "rows": rows,
    }
    columns = ["B", "main_term", "error_scale"] + (["exact", "ratio"] if exact else [])
    return _Outcome(payload, warnings, rows, columns)


# Counting commands


def _run_count(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.counting.points import count_N, moebius_inversion_check

    inst = _require_instance(instance, config.command)
    rows = []
    for B in config.bounds:
        value = count_N(inst, B, work_cap=config.work_cap, workers=config.workers, verbose=verbose)
        rows.append({"B": B, "N": value})
    payload: dict[str, Any] = {"fan_hash": inst.fingerprint(), "m": list(inst.m), "rows": rows}
    if _option(config, "inversion_check", False):
        check = moebius_inversion_check(
            inst, _first_bound(config, "inversion_check"), work_cap=config.work_cap
        )
        payload["inversion_check"] = {"lhs": check.lhs, "rhs": check.rhs, "terms": check.terms}
    return _Outcome(payload, [], rows, ["B", "N"])


def _run_constant(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.counting.constant import leading_constant, leading_constant_dsum, tamagawa_factor

    inst = _require_instance(instance, config.command)
    lc = leading_constant(inst, config.prime_cutoff)
    tam = tamagawa_factor(inst, config.prime_cutoff)
    payload: dict[str, Any] = lc.to_dict()
    payload["tamagawa"] = {
        "tau": float(tam.tau),
        "reconstructed": float(tam.reconstructed),
        "relative_difference": tam.relative_difference,
    }
    d_cap = _option(config, "d_cap")
    if d_cap is not None:
        payload["dsum"] = float(leading_constant_dsum(inst, int(d_cap), config.prime_cutoff))
    return _Outcome(payload, list(lc.warnings))


def _run_asymptotic(config: RunConfig, instance: Optional[OrbifoldInstance], verbose: bool) -> _Outcome:
    from campana_cli.counting.report import COLUMNS, asymptotic_report

    inst = _require_instance(instance, config.command)
    report = asymptotic_report(
        inst,
        config.bounds,
        prime_cutoff=config.prime_cutoff,
        work_cap=config.work_cap,
        workers=config.workers,
        seed=config.seed,
        verbose=verbose,
    )
    return _Outcome(report.to_dict(), list(report.warnings), report.rows, list(COLUMNS))


HANDLERS: dict[str, Handler] = {
    "validate": _run_validate,
    "lp": _run_lp,
    "alpha": _run_alpha,
    "assumption": _run_assumption,
    "slice": _run_slice,
    "mfull.count": _run_mfull_count,
    "mfull.constants": _run_mfull_constants,
    "mfull.verify": _run_mfull_verify,
    "hyperbola.demo": _run_hyperbola_demo,
    "hyperbola.estimate": _run_hyperbola_estimate,
    "count": _run_count,
    "constant": _run_constant,
    "asymptotic": _run_asymptotic,
}

# Commands whose fan must pass validation before they run
_FAN_COMMANDS = {"lp", "alpha", "assumption", "slice", "count", "constant", "asymptotic"}


def _load(config: RunConfig) -> Optional[OrbifoldInstance]:
    if config.fan is None or config.command not in _FAN_COMMANDS | {"validate"}:
        return None
    m = _option(config, "m")
    L = _option(config, "L")
    if L is not None and not isinstance(L, list):
        raise FanFormatError("option 'L' must be a list of coefficients")
    return load_instance(config.fan, m=None if m is None else _int_list(m, "m"), L=L)


def input_hash(config: RunConfig, instance: Optional[OrbifoldInstance]) -> str:
    """SHA-256 of the canonical instance JSON plus the configuration without output paths."""
    body = {
        "fan": None if instance is None else instance.to_dict(),
        "config": config.hashable_dict(),
    }
    text = json.dumps(body, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class DispatchResult:
    envelope: ReportEnvelope
    rows: Optional[list[dict[str, Any]]] = None
    columns: Optional[list[str]] = None


def run(config: RunConfig, verbose: bool = False) -> DispatchResult:
    """Run ``config.command`` and keep its CSV rows next to the envelope."""
    handler = HANDLERS.get(config.command)
    if handler is None:
        raise ConfigError(f"unknown command {config.command!r}")
    start = time.perf_counter()
    instance = _load(config)
    if instance is not None and config.command in _FAN_COMMANDS:
        from campana_cli.validation.validator import validate_fan

        validate_fan(instance.fan)
    with mpmath.workprec(config.precision_bits):
        outcome = handler(config, instance, verbose)
    envelope = ReportEnvelope(
        command=config.command,
        input_hash=input_hash(config, instance),
        seed=config.seed,
        payload={k: _number(v) for k, v in outcome.payload.items()},
        warnings=outcome.warnings,
        timings={"total_seconds": time.perf_counter() - start} if config.record_timings else None,
    )
    return DispatchResult(envelope, outcome.rows, outcome.columns)


def dispatch(config: RunConfig, verbose: bool = False) -> ReportEnvelope:
    """
    Route ``config.command`` to its handler and wrap the result.

    Parameters
    ----------
    config : RunConfig
        Validated run configuration.
    verbose : bool
        Print progress to stderr.

    Returns
    -------
    ReportEnvelope
        Byte-identical for identical configurations unless timings are recorded.
    """
    return run(config, verbose).envelope
