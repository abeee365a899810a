"""Critical mixedness by bisection, n-sweeps and the inverse-polynomial fit."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
import math

import numpy as np

from .errors import BracketError, QuantumnessError, RankDeficientError, TargetUnreachable
from .witness import Family, Pairing, build_witness

MODEL_ORDER = 3


def default_resolution(n):
    return 1e-6 if n <= 8 else 1e-4


@dataclass(frozen=True)
class SweepRecord:
    family: str
    n: int
    p_c: float
    resolution: float
    iterations: int = 0
    min_eig_lo: float = float("nan")
    min_eig_hi: float = float("nan")
    status: str = "ok"
    message: str = ""

    @property
    def ok(self):
        return self.status == "ok"


def _min_eig(family, n, p, pairing, crossover):
    return build_witness(family, n, p, pairing=pairing, crossover=crossover).min_eigenvalue()


def critical_p(family, n, resolution=None, pairing=Pairing.GHZ, crossover=None, max_iter=200):
    """Locate the smallest ``p`` at which the witness acquires a negative eigenvalue.

    The witness entries shrink like ``4**-n``, so the bracket is driven by the
    sign of the smallest eigenvalue alone rather than by an absolute positivity
    tolerance. ``p = 0`` must be PSD and ``p = 1`` must not be.
    """
    family = Family.parse(family)
    resolution = default_resolution(n) if resolution is None else resolution
    if not 0 < resolution < 1:
        raise ValueError("resolution must lie in (0, 1)")
    f_lo = _min_eig(family, n, 0.0, pairing, crossover)
    f_hi = _min_eig(family, n, 1.0, pairing, crossover)
    if f_lo < 0 or f_hi >= 0:
        raise BracketError(
            f"{family.value} n={n}: min eigenvalue {f_lo:.3e} at p=0 and {f_hi:.3e} at p=1 do not bracket a sign change"
        )
    lo, hi = 0.0, 1.0
    iterations = 0
    while hi - lo > resolution:
        if iterations >= max_iter:
            raise BracketError(f"bisection did not reach resolution {resolution} in {max_iter} steps")
        mid = 0.5 * (lo + hi)
        f_mid = _min_eig(family, n, mid, pairing, crossover)
        if f_mid < 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
        iterations += 1
    return SweepRecord(family.value, n, 0.5 * (lo + hi), resolution, iterations, f_lo, f_hi)


def _sweep_point(args):
    family, n, resolution, pairing, crossover = args
    res = default_resolution(n) if resolution is None else resolution
    try:
        return critical_p(family, n, res, pairing=pairing, crossover=crossover)
    except (QuantumnessError, ArithmeticError) as exc:
        return SweepRecord(Family.parse(family).value, n, float("nan"), res, status="error", message=str(exc))


def sweep(family, n_max, n_min=1, resolution=None, pairing=Pairing.GHZ, crossover=None, workers=1):
    """One :class:`SweepRecord` per ``n`` in ``[n_min, n_max]``, sorted by ``n``.

    Failing points are kept as records with ``status == "error"``.
    """
    family = Family.parse(family)
    if family is Family.PLAIN and n_max > 1:
        raise ValueError("plain family only has n = 1")
    jobs = [(family, n, resolution, Pairing(pairing), crossover) for n in range(n_min, n_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_sweep_point, jobs))
    else:
        records = [_sweep_point(job) for job in jobs]
    return sorted(records, key=lambda r: r.n)


def _design(ns):
    ns = np.asarray(ns, dtype=float)
    return np.column_stack([ns**-k for k in range(MODEL_ORDER + 1)])


def model_value(coefficients, n):
    """``c0 + c1/n + c2/n**2 + c3/n**3``."""
    x = 1.0 / np.asarray(n, dtype=float)
    return np.polynomial.polynomial.polyval(x, coefficients)


@dataclass(frozen=True)
class FitResult:
    coefficients: tuple
    residual_rms: float
    n_min: int
    n_max: int
    family: str = ""
    c0_fixed: bool = False
    ns: tuple = field(default=(), repr=False)
    values: tuple = field(default=(), repr=False)

    def predict(self, n):
        return model_value(self.coefficients, n)

    def with_c0(self, value=0.0):
        """Replace the constant term, keeping the other coefficients."""
        coeffs = (float(value),) + tuple(self.coefficients[1:])
        rms = _rms(coeffs, self.ns, self.values) if self.ns else float("nan")
        return replace(self, coefficients=coeffs, residual_rms=rms, c0_fixed=True)

    def as_dict(self):
        d = asdict(self)
        d["coefficients"] = list(self.coefficients)
        d["ns"] = list(self.ns)
        d["values"] = list(self.values)
        return d


def _rms(coeffs, ns, values):
    resid = model_value(coeffs, ns) - np.asarray(values, dtype=float)
    return float(np.sqrt(np.mean(resid**2)))


def fit_inverse_poly(records, fix_c0=None, min_points=5):
    """Least-squares fit of ``p_c(n) = c0 + c1/n + c2/n**2 + c3/n**3``.

    ``records`` is a sequence of :class:`SweepRecord` (failed points are
    skipped) or of ``(n, p_c)`` pairs. When ``fix_c0`` is given the constant
    term is held at that value and only ``c1..c3`` are fitted.
    """
    family = ""
    pts = []
    for r in records:
        if isinstance(r, SweepRecord):
            family = family or r.family
            if r.ok:
                pts.append((r.n, r.p_c))
        else:
            pts.append((int(r[0]), float(r[1])))
    pts.sort()
    if len(pts) < min_points:
        raise ValueError(f"need at least {min_points} sweep points, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    a = _design(ns)
    rhs = ys
    if fix_c0 is not None:
        a = a[:, 1:]
        rhs = ys - fix_c0
    if np.linalg.matrix_rank(a) < a.shape[1]:
        raise RankDeficientError("design matrix is rank deficient (repeated n values?)")
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    coeffs = tuple(float(c) for c in sol)
    if fix_c0 is not None:
        coeffs = (float(fix_c0),) + coeffs
    return FitResult(
        coefficients=coeffs,
        residual_rms=_rms(coeffs, ns, ys),
        n_min=int(ns[0]),
        n_max=int(ns[-1]),
        family=family,
        c0_fixed=fix_c0 is not None,
        ns=tuple(int(n) for n in ns),
        values=tuple(float(y) for y in ys),
    )


def extrapolate_n_required(fit, p_target):
    """Smallest integer ``n >= 1`` with ``model(n) < p_target``.

    The sign of ``model(n) - p_target`` only changes where ``1/n`` is a real
    root of the cubic, so the first integer after each such crossing (plus
    ``n = 1``) are the only candidates.
    """
    coeffs = np.asarray(fit.coefficients if isinstance(fit, FitResult) else fit, dtype=float)
    shifted = coeffs.copy()
    shifted[0] -= p_target
    candidates = {1}
    trimmed = np.trim_zeros(shifted, "b")
    if trimmed.size > 1:
        for root in np.polynomial.polynomial.polyroots(trimmed):
            if abs(root.imag) > 1e-8 * max(1.0, abs(root.real)) or root.real <= 0:
                continue
            b = 1.0 / root.real
            if b > 1e18:
                continue
            base = math.floor(b)
            candidates.update(k for k in (base - 1, base, base + 1, base + 2) if k >= 1)
    for n in sorted(candidates):
        if model_value(coeffs, n) < p_target:
            return n
    raise TargetUnreachable(f"model never drops below {p_target:g} (limit c0 = {coeffs[0]:g})")
