"""Clock/shift modules, canonical bases, Galois symmetry, and restriction.

The N-dimensional irreducible module of a rational Weyl algebra is
realized concretely: the stored clock matrix U is diagonal with entries
e^{2*pi*i*(theta_u + k*M)/N} and the stored shift V maps e_k to
e^{2*pi*i*theta_v/N} e_{k+1 mod N}, so that U V = q V U holds entrywise.

Orientation note (load-bearing): the abstract generator U^a is the
stored U, while V^b is represented by the *adjoint* of the stored V.
With V^b = V (shift up) the pair (Q, P) built from the generator
formulas would satisfy QP - PQ = -i*hbar on smooth states; taking the
adjoint (a Galois-conjugate canonical choice, t = -1) flips the
commutator to +i*hbar while leaving every stored-matrix identity, the
transition matrix, and all permutation symmetries untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from .algebra import WeylAlgebra, is_subalgebra
from .errors import InvalidParameterError, NotAUnitError, NotSubalgebraError

AngleLike = Union[Fraction, float, int]

TWO_PI = 2.0 * math.pi


def _angle_in_unit(value: AngleLike, name: str) -> Union[Fraction, float]:
    if isinstance(value, (int, Fraction)):
        out: Union[Fraction, float] = Fraction(value)
    else:
        out = float(value)
    if not 0 <= out < 1:
        raise InvalidParameterError(f"{name} must lie in [0, 1), got {value}")
    return out


@dataclass(frozen=True)
class CentralCharacter:
    """Pair of angles (fractions of a turn) for the central generators."""

    theta_u: Union[Fraction, float] = Fraction(0)
    theta_v: Union[Fraction, float] = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "theta_u", _angle_in_unit(self.theta_u, "theta_u"))
        object.__setattr__(self, "theta_v", _angle_in_unit(self.theta_v, "theta_v"))

    @property
    def is_principal(self) -> bool:
        return self.theta_u == 0 and self.theta_v == 0

    def to_json_dict(self) -> dict:
        return {"theta_u": float(self.theta_u), "theta_v": float(self.theta_v)}


PRINCIPAL = CentralCharacter()


@dataclass(frozen=True, eq=False)
class WeylModule:
    """Irreducible module with clock/shift matrices and orthonormal basis.

    The dense U, V matrices are materialized lazily; all large-N paths
    work from the structured fields (u_diag, v_phase, v_step) instead.
    index_offset fixes the symmetric grid range {-floor(N/2), ...}.
    """

    descriptor: WeylAlgebra
    character: CentralCharacter
    N: int
    basis_tag: str
    index_offset: int
    u_diag: np.ndarray = field(repr=False)   # stored clock diagonal
    v_phase: complex = field(repr=False)     # stored shift scalar
    v_step: int = field(repr=False)          # stored shift step (slots)

    @cached_property
    def U(self) -> np.ndarray:
        return np.diag(self.u_diag)

    @cached_property
    def V(self) -> np.ndarray:
        out = np.zeros((self.N, self.N), dtype=complex)
        rows = (np.arange(self.N) + self.v_step) % self.N
        out[rows, np.arange(self.N)] = self.v_phase
        return out

    # -- structured applications, O(N) --------------------------------
    def apply_stored_v(self, vec: np.ndarray) -> np.ndarray:
        return self.v_phase * np.roll(vec, self.v_step)

    def apply_stored_v_dagger(self, vec: np.ndarray) -> np.ndarray:
        return np.conj(self.v_phase) * np.roll(vec, -self.v_step)

    def generator_u(self) -> np.ndarray:
        """Matrix of the abstract U^a (equals the stored clock)."""
        return self.U

    def generator_v(self) -> np.ndarray:
        """Matrix of the abstract V^b (adjoint of the stored shift)."""
        return self.V.conj().T

    def to_json_dict(self) -> dict:
        return {
            "descriptor": self.descriptor.to_json_dict(),
            "character": self.character.to_json_dict(),
            "N": self.N,
            "basis_tag": self.basis_tag,
            "index_offset": self.index_offset,
        }


def _phases_from_angles(numerators: np.ndarray, denominator: float) -> np.ndarray:
    # one exponentiation of exact (numerator/denominator) turn angles
    return np.exp(TWO_PI * 1j * (numerators / denominator))


def module(descriptor: WeylAlgebra,
           character: CentralCharacter = PRINCIPAL) -> WeylModule:
    """Clock/shift module twisted by N-th roots of the central values."""
    N, M = descriptor.N, descriptor.M
    k = np.arange(N)
    # angle of U's k-th diagonal entry is (theta_u + k*M)/N turns
    u_diag = _phases_from_angles((k * M) % N + float(character.theta_u), float(N))
    v_phase = complex(np.exp(TWO_PI * 1j * float(character.theta_v) / N))
    return WeylModule(
        descriptor=descriptor,
        character=character,
        N=N,
        basis_tag="U-canonical",
        index_offset=N // 2,
        u_diag=u_diag,
        v_phase=v_phase,
        v_step=1,
    )


def principal_module(descriptor: WeylAlgebra) -> WeylModule:
    return module(descriptor, PRINCIPAL)


def u_to_v_transition(space: WeylModule) -> np.ndarray:
    """Unitary F with F[j, k] = q^{jk}/sqrt(N); F V F^dag is diagonal."""
    if space.basis_tag != "U-canonical":
        raise InvalidParameterError("transition defined from the U-canonical basis")
    N, M = space.N, space.descriptor.M
    jk = np.outer(np.arange(N), np.arange(N)) % N
    return _phases_from_angles((jk * M) % N, float(N)) / math.sqrt(N)


def galois_permutation(N: int, t: int) -> np.ndarray:
    """Index permutation k -> t*k (mod N) of the eigenvalue list."""
    t = t % N
    if math.gcd(t, N) != 1:
        raise NotAUnitError(f"t={t} is not a unit modulo N={N}")
    return (t * np.arange(N)) % N


def galois_transition_matrix(space: WeylModule, t: int) -> np.ndarray:
    """Permutation matrix carrying the old canonical basis to the new one."""
    perm = galois_permutation(space.N, t)
    P = np.zeros((space.N, space.N))
    P[perm, np.arange(space.N)] = 1.0
    return P


def galois_action(space: WeylModule, t: int) -> WeylModule:
    """Present the module in the canonical basis with q replaced by q^t.

    New matrix entries are old[t*j mod N, t*k mod N]: a pure relabelling,
    so inner products of corresponding vectors are unchanged.
    """
    N = space.N
    perm = galois_permutation(N, t)
    t_inv = pow(int(t) % N, -1, N) if N > 1 else 0
    return WeylModule(
        descriptor=space.descriptor,
        character=space.character,
        N=N,
        basis_tag=space.basis_tag,
        index_offset=space.index_offset,
        u_diag=space.u_diag[perm],
        v_phase=space.v_phase,
        v_step=(t_inv * space.v_step) % N,
    )


# ---------------------------------------------------------------------------
# Restriction along a subalgebra inclusion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictionBlock:
    character: CentralCharacter
    multiplicity: int
    isometries: tuple[np.ndarray, ...]   # one N_A x N_B isometry per copy


@dataclass(frozen=True)
class RestrictionDecomposition:
    parent: WeylModule
    sub_descriptor: WeylAlgebra
    blocks: tuple[RestrictionBlock, ...]

    def character_multiset(self) -> list[tuple[float, float]]:
        out = []
        for blk in self.blocks:
            out.extend([(float(blk.character.theta_u), float(blk.character.theta_v))]
                       * blk.multiplicity)
        return sorted(out)

    def total_dimension(self) -> int:
        nb = self.sub_descriptor.N
        return sum(blk.multiplicity * nb for blk in self.blocks)

    def to_json_dict(self) -> dict:
        return {
            "parent": self.parent.to_json_dict(),
            "sub": self.sub_descriptor.to_json_dict(),
            "blocks": [
                {"character": blk.character.to_json_dict(),
                 "multiplicity": blk.multiplicity,
                 "dimension": self.sub_descriptor.N}
                for blk in self.blocks
            ],
        }


def _cluster_by_phase(values: np.ndarray, tol: float = 1e-8) -> list[tuple[complex, np.ndarray]]:
    """Group unit-modulus values by angle; returns (representative, indices)."""
    angles = np.angle(values) / TWO_PI % 1.0
    order = np.argsort(angles)
    groups: list[list[int]] = []
    reps: list[float] = []
    for idx in order:
        ang = angles[idx]
        if groups and (abs(ang - reps[-1]) < tol or abs(ang - reps[-1] - 1) < tol):
            groups[-1].append(idx)
        else:
            groups.append([idx])
            reps.append(ang)
    # wrap-around: first and last group may be the same angle mod 1
    if len(groups) > 1 and abs(reps[0] + 1 - reps[-1]) < tol:
        groups[0].extend(groups.pop())
        reps.pop()
    return [(complex(np.exp(TWO_PI * 1j * rep)), np.asarray(g, dtype=int))
            for rep, g in zip(reps, groups)]


def _eigenspaces_of_unitary(mat: np.ndarray, tol: float = 1e-8) -> list[tuple[complex, np.ndarray]]:
    """Orthonormal eigenbases of a (normal) unitary matrix, clustered."""
    vals, vecs = np.linalg.eig(mat)
    out = []
    for rep, idx in _cluster_by_phase(vals, tol):
        basis, _ = np.linalg.qr(vecs[:, idx])
        out.append((rep, basis))
    return out


def _snap_angle(angle: float, denominator: int, tol: float = 1e-8) -> Union[Fraction, float]:
    """Round to the nearest multiple of 1/denominator when within tol."""
    angle = angle % 1.0
    nearest = round(angle * denominator)
    if abs(angle - nearest / denominator) < tol:
        return Fraction(nearest % denominator, denominator)
    return angle


def restrict_module(parent: WeylModule, sub: WeylAlgebra,
                    tol: float = 1e-8) -> RestrictionDecomposition:
    """Decompose the parent into irreducible modules of a subalgebra.

    Stored-level generators of the subalgebra are plain powers of the
    parent's stored matrices, so the central elements are computed,
    jointly diagonalized, and each joint eigenspace is split into shift
    orbits seeded on the canonical clock eigenvector.
    """
    A = parent.descriptor
    if not is_subalgebra(sub, A):
        raise NotSubalgebraError(
            f"{sub.to_json()} is not contained in {A.to_json()}")
    r = int(sub.a / A.a)
    s = int(sub.b / A.b)
    NA, NB = parent.N, sub.N

    ub_diag = parent.u_diag ** r                      # stored U_B, diagonal
    VB = np.linalg.matrix_power(parent.V, s)          # stored V_B
    c1_diag = ub_diag ** NB
    C2 = np.linalg.matrix_power(VB, NB)

    qb = np.exp(TWO_PI * 1j * float(sub.q_angle))
    blocks: list[RestrictionBlock] = []
    for c1, ix in _cluster_by_phase(c1_diag, tol):
        sub_c2 = C2[np.ix_(ix, ix)]
        for c2, w_local in _eigenspaces_of_unitary(sub_c2, tol):
            W = np.zeros((NA, w_local.shape[1]), dtype=complex)
            W[ix, :] = w_local
            theta_u = _snap_angle(np.angle(c1) / TWO_PI, NA, tol)
            theta_v = _snap_angle(np.angle(c2) / TWO_PI, NA, tol)
            char = CentralCharacter(theta_u, theta_v)
            # clock eigenvectors inside the joint eigenspace
            ub_block = W.conj().T @ (ub_diag[:, None] * W)
            mu0 = np.exp(TWO_PI * 1j * float(char.theta_u) / NB)
            seeds = None
            for mu, basis in _eigenspaces_of_unitary(ub_block, tol):
                if abs(mu - mu0) < math.sqrt(tol):
                    seeds = W @ basis
                    break
            if seeds is None:
                raise InvalidParameterError(
                    "no canonical clock eigenvalue in a joint eigenspace; "
                    "increase tol or check the inclusion")
            zeta = np.exp(TWO_PI * 1j * float(char.theta_v) / NB)
            isometries = []
            for col in range(seeds.shape[1]):
                v = seeds[:, col]
                cols = []
                w = v
                for k in range(NB):
                    cols.append(w / zeta ** k)
                    w = VB @ w
                isometries.append(np.column_stack(cols))
            blocks.append(RestrictionBlock(
                character=char,
                multiplicity=len(isometries),
                isometries=tuple(isometries),
            ))
    blocks.sort(key=lambda blk: (float(blk.character.theta_u),
                                 float(blk.character.theta_v)))
    decomp = RestrictionDecomposition(parent=parent, sub_descriptor=sub,
                                      blocks=tuple(blocks))
    if decomp.total_dimension() != NA:
        raise InvalidParameterError(
            f"restriction bookkeeping failed: {decomp.total_dimension()} != {NA}")
    return decomp
