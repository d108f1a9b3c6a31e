"""Floating-point procedures: the 2x2x2 pencil test, border-rank-2 normal forms,
the approximating curve, and best symmetric rank-one approximation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from .analysis import unfold
from .errors import BadEpsilon, DidNotConverge, InputError, SingularPencil, UnsupportedField, WrongShape
from .fields import COMPLEX, REAL, Field
from .linalg import DEFAULT_TOL, matrix_rank
from .tensor import Decomposition, SymTensor, Tensor, sym_term

PENCIL_TOL = 1e-7
STALL_STEP = 1e-6
# Slice mixings (alpha, beta) tried in order when the first slice is singular.
PENCIL_MIXES = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2))


def _float_field(s: Tensor) -> Field:
    if not s.field.is_float:
        raise UnsupportedField(f"numeric procedures need float64 or complex128, got {s.field}")
    return s.field


def _cplx(v) -> list:
    return [[float(np.real(x)), float(np.imag(x))] for x in np.ravel(v)]


def _jsonable(v) -> Any:
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return _cplx(v) if v.ndim else [float(v.real), float(v.imag)]
    return v.tolist()


# -- pencil test ----------------------------------------------------------------


@dataclass
class PencilVerdict:
    rank_le_2: bool
    evidence: dict

    def to_json(self) -> dict[str, Any]:
        return {"rank_le_2": self.rank_le_2, "evidence": self.evidence}


def _diagonalizable(K: np.ndarray, tol: float) -> tuple[bool, dict]:
    n = K.shape[0]
    eig = np.linalg.eigvals(K)
    scale = max(float(np.max(np.abs(eig))), float(np.linalg.norm(K, 2)), 1e-300)
    clusters: list[list[complex]] = []
    for lam in eig:
        for c in clusters:
            if abs(lam - c[0]) <= tol * scale:
                c.append(lam)
                break
        else:
            clusters.append([lam])
    info = []
    total_geo = 0
    for c in clusters:
        mu = complex(np.mean(c))
        sv = np.linalg.svd(K - mu * np.eye(n), compute_uv=False)
        geo = int(np.sum(sv <= tol * scale))
        total_geo += min(geo, len(c))
        info.append({"eigenvalue": [mu.real, mu.imag], "algebraic": len(c), "geometric": geo})
    return total_geo == n, {"eigenvalues": info}


def pencil_rank2_test(s: Tensor, tol: float = PENCIL_TOL) -> PencilVerdict:
    """Decide rank <= 2 for a 2x2x2 tensor from the eigenstructure of ``G F^{-1}``.

    ``F`` and ``G`` are the slices with last index 1 and 2.  A singular ``F``
    is replaced by the invertible mixing ``F' = aF + bG, G' = -bF + aG``.
    """
    _float_field(s)
    if s.order != 3 or s.dim != 2:
        raise WrongShape("the pencil test applies to 2x2x2 tensors")
    data = np.asarray(s.data, dtype=np.complex128)
    F, G = data[:, :, 0], data[:, :, 1]
    ra = matrix_rank(unfold(s), s.field)
    if ra <= 1:
        return PencilVerdict(True, {"reason": f"rank A = {ra}", "rank_a": ra})
    scale = max(np.linalg.norm(F), np.linalg.norm(G))
    for a, b in PENCIL_MIXES:
        Fm, Gm = a * F + b * G, -b * F + a * G
        sv = np.linalg.svd(Fm, compute_uv=False)
        if sv[-1] <= tol * scale:
            continue
        K = Gm @ np.linalg.inv(Fm)
        ok, ev = _diagonalizable(K, tol)
        ev.update({"mix": [a, b], "K": _jsonable(K), "rank_a": ra})
        return PencilVerdict(ok, ev)
    raise SingularPencil("no tried slice combination is invertible")


def _snap(v: np.ndarray, eps: float = 1e-14) -> np.ndarray:
    """Zero out real or imaginary parts below ``eps`` (rounding debris from phase fixes)."""
    re, im = np.real(v).copy(), np.imag(v).copy()
    re[np.abs(re) < eps] = 0.0
    im[np.abs(im) < eps] = 0.0
    return re + 1j * im


# -- border rank 2 ----------------------------------------------------------------


def _w_sum(x: np.ndarray, y: np.ndarray, d: int) -> np.ndarray:
    """``sum_j x^{⊗j} ⊗ y ⊗ x^{⊗(d-1-j)}``."""
    total = 0
    for j in range(d):
        vecs = [x] * j + [y] + [x] * (d - 1 - j)
        t = vecs[0]
        for v in vecs[1:]:
            t = np.multiply.outer(t, v)
        total = total + t
    return total


def _power(x: np.ndarray, d: int) -> np.ndarray:
    t = x
    for _ in range(d - 1):
        t = np.multiply.outer(t, x)
    return t


@dataclass
class BorderForm:
    """``a x^{⊗d} + b sum_j x^{⊗j} ⊗ y ⊗ x^{⊗(d-1-j)}`` with ``x, y`` independent and ``b != 0``."""

    x: np.ndarray
    y: np.ndarray
    a: complex
    b: complex
    order: int
    residual: float = 0.0

    def tensor(self) -> np.ndarray:
        return self.a * _power(self.x, self.order) + self.b * _w_sum(self.x, self.y, self.order)

    def to_json(self) -> dict[str, Any]:
        real = not any(np.iscomplexobj(np.asarray(v)) and np.any(np.imag(v)) for v in (self.x, self.y, self.a, self.b))
        conv = (lambda v: np.asarray(np.real(v)).tolist()) if real else _jsonable
        return {
            "x": conv(self.x),
            "y": conv(self.y),
            "a": conv(self.a),
            "b": conv(self.b),
            "order": self.order,
            "residual": self.residual,
        }


def _contract_to_cubic(core: np.ndarray) -> np.ndarray:
    d = core.ndim
    if d == 3:
        return core
    best, best_norm = None, -1.0
    for v in np.eye(2):
        c = core
        for _ in range(d - 3):
            c = c @ v
        h = np.linalg.norm(_hessian(c))
        if h > best_norm:
            best, best_norm = c, h
    return best


def _hessian(c: np.ndarray) -> np.ndarray:
    # Coefficients of det(z1 F + z2 G) as a symmetric 2x2 matrix.
    F, G = c[:, :, 0], c[:, :, 1]
    mid = F[0, 0] * G[1, 1] + F[1, 1] * G[0, 0] - F[0, 1] * G[1, 0] - F[1, 0] * G[0, 1]
    return np.array([[np.linalg.det(F), mid / 2], [mid / 2, np.linalg.det(G)]])


def detect_border_rank2(s: Tensor, tol: float = 1e-10, rank_tol: float = DEFAULT_TOL) -> BorderForm | None:
    """A witness ``(x, y, a, b)`` when ``s`` has the border-rank-2 normal form, else None.

    The returned ``x`` and ``y`` are orthonormal, with the largest entry of
    ``x`` real and positive.  The witness is accepted only if it reproduces
    ``s`` to within ``tol * ||s||``.
    """
    f = _float_field(s)
    if s.order < 3:
        return None
    norm = s.norm()
    if norm == 0:
        return None
    A = unfold(s).astype(np.complex128)
    if matrix_rank(A, COMPLEX, rank_tol) != 2:
        return None
    U = np.linalg.svd(A)[0][:, :2]
    data = np.asarray(s.data, dtype=np.complex128)
    core = data
    for k in range(s.order):
        core = np.moveaxis(np.tensordot(U.conj().T, core, axes=([1], [k])), 0, k)
    H = _hessian(_contract_to_cubic(core))
    hs = np.linalg.svd(H, compute_uv=False)
    if hs[0] == 0 or hs[1] > 1e-6 * hs[0]:
        return None
    col = H[:, int(np.argmax(np.linalg.norm(H, axis=0)))]
    x2 = col / np.linalg.norm(col)
    x = U @ x2
    x = x * np.exp(-1j * np.angle(x[int(np.argmax(np.abs(x)))]))
    z2 = np.array([-np.conj(x2[1]), np.conj(x2[0])])
    y = U @ z2
    d = s.order
    a = np.vdot(_power(x, d).ravel(), data.ravel())
    w_unit = _w_sum(x, y, d)
    b = np.vdot(w_unit.ravel(), data.ravel()) / np.vdot(w_unit.ravel(), w_unit.ravel())
    # Give y the phase that makes b real and positive.
    y = y * np.exp(1j * np.angle(b))
    b = abs(b)
    if f.kind == "real":
        if np.max(np.abs(np.imag(x))) > 1e-9 or np.max(np.abs(np.imag(y))) > 1e-9 or abs(np.imag(a)) > 1e-9 * norm:
            return None
        x, y, a = np.real(x), np.real(y), float(np.real(a))
    else:
        x, y, a = _snap(x), _snap(y), complex(_snap(np.array([a]))[0])
    form = BorderForm(x, y, a, b, d)
    if b <= tol * norm:
        return None
    form.residual = float(np.linalg.norm(form.tensor() - data))
    if form.residual > tol * norm:
        return None
    return form


@dataclass
class EpsCurve:
    """``T(eps) = a x^{⊗d} + (1/eps)((x + eps b y)^{⊗d} - x^{⊗d})``; tends to the form as eps -> 0."""

    form: BorderForm

    def predicted_error(self, eps: float) -> float:
        """``||T(eps) - S||`` when ``x`` and ``y`` are orthonormal."""
        d, b = self.form.order, abs(self.form.b)
        return math.sqrt(sum(math.comb(d, k) * abs(eps) ** (2 * (k - 1)) * b ** (2 * k) for k in range(2, d + 1)))

    def error_bound(self, eps: float) -> float:
        """Triangle-inequality bound on ``||T(eps) - S||`` for arbitrary ``x, y``."""
        d, b = self.form.order, abs(self.form.b)
        nx, ny = np.linalg.norm(self.form.x), np.linalg.norm(self.form.y)
        return sum(math.comb(d, k) * abs(eps) ** (k - 1) * b**k * nx ** (d - k) * ny**k for k in range(2, d + 1))

    def to_json(self) -> dict[str, Any]:
        return {"form": self.form.to_json(), "formula": "(a - 1/eps) x^d + (1/eps) (x + eps*b*y)^d"}


def eps_curve(form: BorderForm) -> EpsCurve:
    return EpsCurve(form)


def eval_eps(curve: EpsCurve, eps: float) -> Decomposition:
    """Two-term decomposition of ``T(eps)``."""
    form = curve.form
    if eps == 0:
        raise BadEpsilon("eps must be nonzero")
    inv = 1 / eps
    if np.isclose(inv, form.a, rtol=1e-12, atol=0):
        raise BadEpsilon("1/eps equals a; T(eps) degenerates to rank one")
    cplx = any(np.iscomplexobj(np.asarray(v)) for v in (form.x, form.y, form.a, form.b, eps))
    f = COMPLEX if cplx else REAL
    terms = [
        sym_term(form.a - inv, form.x, f),
        sym_term(inv, np.asarray(form.x) + eps * form.b * np.asarray(form.y), f),
    ]
    return Decomposition(terms, f, form.order, len(form.x), meta={"eps": eps})


# -- best rank-one approximation ---------------------------------------------------


def _contract_all_but_last(data: np.ndarray, u: np.ndarray) -> np.ndarray:
    g = data
    for _ in range(data.ndim - 1):
        g = g @ u
    return g


def _objective(data: np.ndarray, u: np.ndarray) -> complex:
    """``<S, u^{⊗d}>`` with conjugation on the second argument."""
    return complex(np.dot(_contract_all_but_last(data, np.conj(u)), np.conj(u)))


@dataclass
class StartRecord:
    start: int
    converged: bool
    iterations: int
    objective: float
    monotone: bool
    trajectory: list = dc_field(default_factory=list, repr=False)


@dataclass
class RankOneFit:
    sigma: complex | float
    u: np.ndarray
    residual: float
    starts: list[StartRecord]
    seed: int

    def to_json(self, verbose: bool = False) -> dict[str, Any]:
        out = {
            "sigma": _jsonable(self.sigma),
            "u": _jsonable(self.u),
            "residual": self.residual,
            "seed": self.seed,
            "starts": [
                {k: v for k, v in vars(r).items() if verbose or k != "trajectory"} for r in self.starts
            ],
        }
        return out


def _phase_fix(data, u, real, sign):
    """Rotate ``u`` so that ``sign * <S, u^d>`` is real and nonnegative where possible."""
    val = _objective(data, u)
    if real:
        if data.ndim % 2 == 1 and val.real < 0:
            u = -u
        return u
    if abs(val) > 0:
        u = u * np.exp(-1j * np.angle(np.conj(val)) / data.ndim)
    return u


def _value(data, u, real, sign):
    val = _objective(data, u)
    if real and data.ndim % 2 == 0:
        return sign * val.real
    return abs(val)


def _shift(data, u, real, sign, tau):
    """Shift that makes the shifted objective locally convex at ``u``.

    Uses the smallest eigenvalue of ``S`` contracted with ``d-2`` copies of
    ``u`` (a spectral-norm bound in the complex case).
    """
    d = data.ndim
    M = data
    v = u if real else np.conj(u)
    for _ in range(d - 2):
        M = M @ v
    if real:
        lam = float(np.linalg.eigvalsh(sign * M).min())
        return max(0.0, tau - (d - 1) * lam)
    return tau + (d - 1) * float(np.linalg.norm(M, 2))


def _sym_power_iteration(data, u0, real, max_iter, tol, norm):
    """Shifted symmetric power iteration from ``u0``; returns (u, converged, iterations, trajectory)."""
    d = data.ndim
    u = u0 / np.linalg.norm(u0)
    sign = 1.0
    if real and d % 2 == 0:
        v0 = _objective(data, u).real
        sign = -1.0 if v0 < 0 else 1.0
    u = _phase_fix(data, u, real, sign)
    cur = _value(data, u, real, sign)
    traj = [cur]
    for it in range(1, max_iter + 1):
        g = sign * _contract_all_but_last(data, u if real else np.conj(u))
        alpha = _shift(data, u, real, sign, 1e-6 * norm)
        while True:
            step = g + alpha * u
            nrm = np.linalg.norm(step)
            cand = u if nrm == 0 else _phase_fix(data, step / nrm, real, sign)
            val = _value(data, cand, real, sign)
            if val >= cur - 1e-15 * max(1.0, abs(cur)):
                break
            alpha = max(2 * alpha, norm)
            if alpha > (d - 1) * norm * 64:
                cand, val = u, cur
                break
        moved = np.linalg.norm(cand - u)
        rel = abs(val - cur) / max(abs(cur), 1e-300)
        u, cur = cand, val
        traj.append(cur)
        # A stalled objective only counts once the steps are already small.
        if moved < tol or (rel < 1e-15 and moved < STALL_STEP):
            return u, True, it, traj, sign
    return u, False, max_iter, traj, sign


def _starts(data: np.ndarray, restarts: int, seed: int, real: bool) -> list[np.ndarray]:
    n = data.shape[0]
    A = data.reshape(n, -1)
    first = np.linalg.svd(A)[0][:, 0]
    rng = np.random.default_rng(seed)
    out = [first]
    for _ in range(restarts - 1):
        v = rng.standard_normal(n)
        if not real:
            v = v + 1j * rng.standard_normal(n)
        out.append(v)
    return out


def best_sym_rank1(
    s: Tensor,
    restarts: int = 16,
    tol: float = 1e-12,
    seed: int = 0,
    max_iter: int = 500,
    extra_starts: list | None = None,
) -> RankOneFit:
    """Best symmetric rank-one approximation ``sigma u^{⊗d}`` by multi-start power iteration.

    The first start is the dominant left singular vector of the unfolding;
    the others are seeded Gaussian vectors.  The objective ``|<S, u^d>|``
    never decreases along an iteration (a shift is added when a plain step
    would lose ground).
    """
    f = _float_field(s)
    real = f.kind == "real"
    data = np.asarray(s.data, dtype=np.float64 if real else np.complex128)
    norm = float(np.linalg.norm(data))
    if norm == 0:
        raise InputError("the zero tensor has no best rank-one approximation")
    if restarts < 1:
        raise InputError("need at least one start")
    starts = _starts(data, restarts, seed, real) + [np.asarray(v) for v in (extra_starts or [])]
    records, best = [], None
    for i, u0 in enumerate(starts):
        u0 = np.asarray(u0, dtype=data.dtype)
        if np.linalg.norm(u0) == 0:
            continue
        u, ok, its, traj, sign = _sym_power_iteration(data, u0, real, max_iter, tol, norm)
        mono = all(b >= a - 1e-12 * max(1.0, abs(a)) for a, b in zip(traj, traj[1:]))
        records.append(StartRecord(i, ok, its, traj[-1], mono, traj))
        if ok and (best is None or abs(_objective(data, u)) > abs(_objective(data, best))):
            best = u
    if best is None:
        raise DidNotConverge(f"none of {len(starts)} starts converged within {max_iter} iterations")
    sigma = _objective(data, best)
    if real:
        sigma = sigma.real
    approx = sigma * _power(best, data.ndim)
    residual = float(np.linalg.norm(data - approx))
    return RankOneFit(sigma, best, residual, records, seed)


def _als_rank1(data, starts, max_iter, tol):
    """Unconstrained rank-one fits ``x_1 ⊗ ... ⊗ x_d`` by alternating updates, with residuals."""
    d = data.ndim
    fits = []
    for u0 in starts:
        xs = [u0 / np.linalg.norm(u0) for _ in range(d)]
        prev = None
        for _ in range(max_iter):
            for k in range(d):
                g = np.moveaxis(data, k, 0)
                for j in [j for j in range(d) if j != k][::-1]:
                    g = g @ np.conj(xs[j])
                nrm = np.linalg.norm(g)
                if nrm == 0:
                    break
                xs[k] = g / nrm
            val = np.conj(data)
            for x in xs[::-1]:
                val = val @ x
            val = abs(complex(val))
            if prev is not None and abs(val - prev) <= 1e-15 * max(val, 1e-300):
                break
            prev = val
        outer = xs[0]
        for x in xs[1:]:
            outer = np.multiply.outer(outer, x)
        coef = np.vdot(outer, data)
        fits.append((xs, float(np.linalg.norm(data - coef * outer))))
    return fits


@dataclass
class BanachReport:
    symmetric_residual: float
    unconstrained_residual: float
    difference: float
    per_start: list
    seed: int

    def to_json(self) -> dict[str, Any]:
        return vars(self).copy()


def banach_symmetry_check(s: Tensor, restarts: int = 16, tol: float = 1e-8, seed: int = 0, max_iter: int = 500) -> BanachReport:
    """Compare unconstrained and symmetric best rank-one residuals from shared seeds.

    ``difference = unconstrained - symmetric``; a symmetric best approximation
    is expected to do at least as well, i.e. ``difference >= -tol``.
    """
    f = _float_field(s)
    real = f.kind == "real"
    data = np.asarray(s.data, dtype=np.float64 if real else np.complex128)
    if not np.any(data):
        raise InputError("the zero tensor has no best rank-one approximation")
    starts = _starts(data, restarts, seed, real)
    fits = _als_rank1(data, starts, max_iter, tol)
    un_res = [r for _, r in fits]
    extra = [xs[0] for xs, _ in fits]
    sym = best_sym_rank1(s, restarts, seed=seed, max_iter=max_iter, extra_starts=extra)
    best_un = min(un_res)
    return BanachReport(sym.residual, best_un, best_un - sym.residual,
                        [{"start": i, "unconstrained_residual": r} for i, r in enumerate(un_res)], seed)
