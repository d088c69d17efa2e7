"""Primal-dual interior-point solver for small conic programs

    minimize    c'x
    subject to  F0_j + sum_i x_i F_ij   PSD        (dense symmetric blocks)
                g0_k + G_k x            >= 0       (orthant blocks)

Mehrotra predictor-corrector with Nesterov-Todd scaling.  Complex Hermitian
constraints enter through their real symmetric embedding (``real_embed``),
which doubles the block size and the eigenvalue multiplicities but keeps all
solver arithmetic real.  Block eigendecompositions use the in-repo Jacobi
kernels; the Schur system is solved by Cholesky factorization.

Step control: fraction-to-boundary 0.98, at most 200 iterations, relative
complementarity-gap target 1e-7 by default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

EIG_TOL = 1e-13


class SdpConvergenceError(RuntimeError):
    """Solver stopped before reaching the gap target; carries the best iterate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def real_embed(h: np.ndarray) -> np.ndarray:
    """Complex Hermitian d x d -> real symmetric 2d x 2d with doubled spectrum."""
    h = np.asarray(h, dtype=np.complex128)
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


def real_unembed(s: np.ndarray) -> np.ndarray:
    """Inverse of real_embed up to Hermitization of roundoff."""
    d = s.shape[0] // 2
    re = (s[:d, :d] + s[d:, d:]) / 2.0
    im = (s[d:, :d] - s[:d, d:]) / 2.0
    h = re + 1j * im
    return (h + h.conj().T) / 2.0


class SdpBlock:
    """Affine map x -> F0 + sum_i x_i F[i] into symmetric matrices."""

    kind = "sdp"

    def __init__(self, F0: np.ndarray, F: np.ndarray):
        self.F0 = F0
        self.F = F
        self.size = F0.shape[0]

    def slack(self, x):
        return self.F0 + np.tensordot(x, self.F, axes=(0, 0))

    def apply(self, dx):
        return np.tensordot(dx, self.F, axes=(0, 0))

    def adjoint(self, Z):
        return np.tensordot(self.F, Z, axes=([1, 2], [0, 1]))


class LpBlock:
    """Affine map x -> g0 + G x into the nonnegative orthant."""

    kind = "lp"

    def __init__(self, g0: np.ndarray, G: np.ndarray):
        self.g0 = g0
        self.G = G
        self.size = g0.size

    def slack(self, x):
        return self.g0 + self.G @ x

    def apply(self, dx):
        return self.G @ dx

    def adjoint(self, z):
        return self.G.T @ z


@dataclass
class IpmResult:
    x: np.ndarray
    slacks: list
    duals: list
    gap: float
    dual_residual: float
    objective: float
    iterations: int
    converged: bool


def _eigh(A):
    return kernels.jacobi_eigh_real(np.ascontiguousarray(A), EIG_TOL)


def _max_step_diag_scaled(lam, D):
    """sup alpha with diag(lam) + alpha D PSD (lam > 0 elementwise)."""
    li = 1.0 / np.sqrt(lam)
    M = (li[:, None] * D) * li[None, :]
    w, _ = _eigh(M)
    t = w[0]
    return np.inf if t >= 0.0 else 1.0 / (-t)


def _max_step_pos(s, ds):
    neg = ds < 0
    if not neg.any():
        return np.inf
    return float(np.min(-s[neg] / ds[neg]))


def solve_conic(
    c: np.ndarray,
    blocks: list,
    x0: np.ndarray,
    gap_tol: float = 1e-7,
    max_iter: int = 200,
    step_frac: float = 0.98,
) -> IpmResult:
    """Run the predictor-corrector IPM from a strictly feasible primal x0."""
    c = np.asarray(c, dtype=float)
    x = np.asarray(x0, dtype=float).copy()
    nb = len(blocks)
    Z = [np.eye(b.size) if b.kind == "sdp" else np.ones(b.size) for b in blocks]
    nu = sum(b.size for b in blocks)
    best = None

    def pairing(Ss, Zs):
        return sum(
            float(np.vdot(Ss[j], Zs[j]).real) for j in range(nb)
        )

    for it in range(max_iter):
        S = [b.slack(x) for b in blocks]
        gap = pairing(S, Z)
        rd = c - sum(blocks[j].adjoint(Z[j]) for j in range(nb))
        obj = float(c @ x)
        rd_norm = float(np.linalg.norm(rd, np.inf))
        result = IpmResult(
            x=x.copy(), slacks=S, duals=[z.copy() for z in Z], gap=gap,
            dual_residual=rd_norm, objective=obj, iterations=it, converged=False,
        )
        if best is None or gap + rd_norm < best.gap + best.dual_residual:
            best = result
        if gap <= gap_tol * (1.0 + abs(obj)) and rd_norm <= gap_tol * (
            1.0 + np.linalg.norm(c, np.inf)
        ):
            result.converged = True
            return result
        mu = gap / nu

        # NT scaling per block: factor R with W = R R', scaled point diagonal
        scal = []
        H = np.zeros((c.size, c.size))
        for j, b in enumerate(blocks):
            if b.kind == "sdp":
                wz, Uz = _eigh(Z[j])
                wz = np.maximum(wz, 1e-300)
                Zh = (Uz * np.sqrt(wz)) @ Uz.T
                Zhi = (Uz / np.sqrt(wz)) @ Uz.T
                M = Zh @ S[j] @ Zh
                wm, Um = _eigh((M + M.T) / 2.0)
                wm = np.maximum(wm, 1e-300)
                R = Zhi @ (Um * wm ** 0.25)
                Ri = (Um * wm ** -0.25).T @ Zh
                lam = np.sqrt(wm)
                Winv = Ri.T @ Ri
                G = np.matmul(np.matmul(Winv[None], b.F), Winv[None])
                H += np.tensordot(b.F, G, axes=([1, 2], [1, 2]))
                scal.append((R, Ri, lam))
            else:
                s, z = S[j], Z[j]
                w = np.sqrt(s / z)
                lam = np.sqrt(s * z)
                H += (b.G / (w ** 2)[:, None]).T @ b.G
                scal.append((w, None, lam))
        H = (H + H.T) / 2.0
        try:
            L = np.linalg.cholesky(H + 1e-14 * np.trace(H) / c.size * np.eye(c.size))
        except np.linalg.LinAlgError:
            raise SdpConvergenceError(
                f"Schur system not positive definite at iteration {it}", best
            ) from None

        def schur_solve(rhs):
            y = np.linalg.solve(L, rhs)
            return np.linalg.solve(L.T, y)

        def directions(sig, corr):
            """Newton direction; corr is the affine (ds, dz) list or None."""
            if corr is None:
                rhs = -c.copy()  # A*(W^{-1/2}(-lam)W^{-1/2}) - rd = -c
            else:
                rhs = -rd.copy()
                for j, b in enumerate(blocks):
                    if b.kind == "sdp":
                        R, Ri, lam = scal[j]
                        dsa, dza = corr[j]
                        Cm = (dsa @ dza + dza @ dsa) / 2.0
                        Rm = sig * mu * np.eye(b.size) - np.diag(lam ** 2) - Cm
                        K = 2.0 * Rm / (lam[:, None] + lam[None, :])
                        T = Ri.T @ K @ Ri
                        rhs += b.adjoint((T + T.T) / 2.0)
                    else:
                        w, _, lam = scal[j]
                        dsa, dza = corr[j]
                        K = (sig * mu - lam ** 2 - dsa * dza) / lam
                        rhs += b.adjoint(K / w)
            dx = schur_solve(rhs)
            out = []
            for j, b in enumerate(blocks):
                dS = b.apply(dx)
                if b.kind == "sdp":
                    R, Ri, lam = scal[j]
                    ds = Ri @ dS @ Ri.T
                    ds = (ds + ds.T) / 2.0
                    if corr is None:
                        K = -np.diag(lam)
                    else:
                        dsa, dza = corr[j]
                        Cm = (dsa @ dza + dza @ dsa) / 2.0
                        Rm = sig * mu * np.eye(b.size) - np.diag(lam ** 2) - Cm
                        K = 2.0 * Rm / (lam[:, None] + lam[None, :])
                    dz = K - ds
                    dZ = Ri.T @ dz @ Ri
                    out.append((dS, (dZ + dZ.T) / 2.0, ds, dz))
                else:
                    w, _, lam = scal[j]
                    ds = dS / w
                    if corr is None:
                        K = -lam
                    else:
                        dsa, dza = corr[j]
                        K = (sig * mu - lam ** 2 - dsa * dza) / lam
                    dz = K - ds
                    out.append((dS, dz / w, ds, dz))
            return dx, out

        def boundary_steps(dirs):
            ap = ad = np.inf
            for j, b in enumerate(blocks):
                lam = scal[j][2]
                if b.kind == "sdp":
                    ap = min(ap, _max_step_diag_scaled(lam, dirs[j][2]))
                    ad = min(ad, _max_step_diag_scaled(lam, dirs[j][3]))
                else:
                    ap = min(ap, _max_step_pos(lam, dirs[j][2]))
                    ad = min(ad, _max_step_pos(lam, dirs[j][3]))
            return ap, ad

        dx_a, dirs_a = directions(0.0, None)
        ap, ad = boundary_steps(dirs_a)
        ap, ad = min(1.0, ap), min(1.0, ad)
        mu_aff = pairing(
            [S[j] + ap * dirs_a[j][0] for j in range(nb)],
            [Z[j] + ad * dirs_a[j][1] for j in range(nb)],
        ) / nu
        sig = float(np.clip((max(mu_aff, 0.0) / mu) ** 3, 1e-10, 1.0))

        corr = [(dirs_a[j][2], dirs_a[j][3]) for j in range(nb)]
        dx, dirs = directions(sig, corr)
        ap, ad = boundary_steps(dirs)
        ap = min(1.0, step_frac * ap)
        ad = min(1.0, step_frac * ad)
        if ap < 1e-12 and ad < 1e-12:
            raise SdpConvergenceError(f"step collapsed at iteration {it}", best)
        x = x + ap * dx
        Z = [Z[j] + ad * dirs[j][1] for j in range(nb)]

    S = [b.slack(x) for b in blocks]
    gap = pairing(S, Z)
    rd = c - sum(blocks[j].adjoint(Z[j]) for j in range(nb))
    final = IpmResult(
        x=x, slacks=S, duals=Z, gap=gap,
        dual_residual=float(np.linalg.norm(rd, np.inf)),
        objective=float(c @ x), iterations=max_iter, converged=False,
    )
    if best is not None and best.gap + best.dual_residual < final.gap + final.dual_residual:
        final = best
    raise SdpConvergenceError(
        f"no convergence after {max_iter} iterations (gap {final.gap:.3e})", final
    )
