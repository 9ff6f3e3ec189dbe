"""Hopf-algebra structure on Borel algebras and the Honda tower.

A level of the tower is H_r = GF(p)[x]/(x^{q^r}) with coproduct
psi(x) = F(x (x) 1, 1 (x) x) reduced into H_r (x) H_r, counit the
augmentation, and antipode the formal inverse series.  The tower maps are
x_{r+s} -> x_r (a Hopf surjection) and x_s -> x_{r+s}^{q^r} (a Hopf
injection); multiplication by p^r is the q^r-power map, and its kernel
ideal is exactly the kernel of the surjection -- the p-divisibility
diagnostics check all of this as matrix identities.

Coproducts/antipodes are stored on generators only; every axiom checked
here compares algebra maps, so generator-level equality is equality.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .exactkernel import (
    BudgetError,
    ExactKernelError,
    FpMatrix,
    mat_kernel,
    row_space_basis,
    subspace_eq,
)
from .borel import AlgebraMap, BorelAlgebra, El, tensor
from .fgl import Fgl, HondaParams, formal_inverse, honda_fgl, m_series

DEFAULT_BUDGET = 256


class HopfStructure:
    """Coproduct / counit / antipode data on a Borel algebra, stored on
    generators (all three extend as algebra maps)."""

    def __init__(self, algebra: BorelAlgebra, coproduct_gens, antipode_gens):
        self.algebra = algebra
        self.square = tensor(algebra, algebra)
        T2 = self.square.algebra
        self.coproduct_gens = [g if isinstance(g, El) else El(T2, g) for g in coproduct_gens]
        self.antipode_gens = [g if isinstance(g, El) else El(algebra, g) for g in antipode_gens]
        if len(self.coproduct_gens) != algebra.nvars or len(self.antipode_gens) != algebra.nvars:
            raise ExactKernelError("need one coproduct and antipode image per generator")
        self._psi = None
        self._chi = None

    @property
    def coproduct(self) -> AlgebraMap:
        """psi as an algebra map A -> A (x) A (matrix over the monomial basis)."""
        if self._psi is None:
            self._psi = AlgebraMap.from_generator_images(
                self.algebra, self.square.algebra, self.coproduct_gens
            )
        return self._psi

    @property
    def antipode(self) -> AlgebraMap:
        if self._chi is None:
            self._chi = AlgebraMap.from_generator_images(
                self.algebra, self.algebra, self.antipode_gens
            )
        return self._chi

    def counit_vec(self) -> np.ndarray:
        v = np.zeros(self.algebra.dim, dtype=np.int64)
        v[0] = 1
        return v

    def gen_coeff_matrix(self, i: int = 0) -> np.ndarray:
        """psi(x_i) as a (dim x dim) coefficient array M[a, b]."""
        vec = self.coproduct_gens[i].vec
        return vec[self.square.pair_index]


@dataclass
class HopfReport:
    coassociative: bool
    counital: bool
    antipode_law: bool
    cocommutative: bool

    @property
    def all_pass(self) -> bool:
        return self.coassociative and self.counital and self.antipode_law and self.cocommutative

    def as_dict(self) -> dict:
        return {
            "coassociative": self.coassociative,
            "counital": self.counital,
            "antipode": self.antipode_law,
            "cocommutative": self.cocommutative,
            "all_pass": self.all_pass,
        }


def hopf_check(H: HopfStructure) -> HopfReport:
    """Verify the Hopf axioms on every generator.

    All four sides of the axioms are algebra maps (cocommutativity and
    commutativity make the antipode convolution multiplicative), so checking
    generators decides the axioms on the whole algebra.
    """
    A = H.algebra
    p = A.p
    dim = A.dim
    psi_full = H.coproduct.matrix  # (dim^2-as-T2, dim)
    pair = H.square.pair_index
    # ps[b] = psi(e_b) as (dim x dim) coefficient array
    ps = psi_full.T[:, pair]  # shape (dim, dim, dim): [b, u, v]
    chi = H.antipode.matrix
    eye = np.eye(dim, dtype=np.int64)

    coassoc = counital = antipode_ok = cocomm = True
    for i in range(A.nvars):
        M = H.gen_coeff_matrix(i)
        xvec = A.gen(i).vec
        # (psi (x) id) psi(x) [u,v,w] = sum_a ps[a,u,v] M[a,w]
        lhs = np.tensordot(ps, M, axes=([0], [0])) % p  # [u, v, w]
        # (id (x) psi) psi(x) [u,v,w] = sum_b M[u,b] ps[b,v,w]
        rhs = np.tensordot(M, ps, axes=([1], [0])) % p
        if not np.array_equal(lhs, rhs):
            coassoc = False
        if not np.array_equal(M[0, :], xvec) or not np.array_equal(M[:, 0], xvec):
            counital = False
        if not np.array_equal(M, M.T):
            cocomm = False
        # mu (chi (x) id) psi(x) = aug(x) 1 = 0 for a generator
        acc = np.zeros(dim, dtype=np.int64)
        for b in range(dim):
            col = (chi @ M[:, b]) % p
            if col.any():
                acc = (acc + A.mul_vec(col, eye[b])) % p
        if acc.any():
            antipode_ok = False
    return HopfReport(coassoc, counital, antipode_ok, cocomm)


def integrals(H: HopfStructure) -> list[El]:
    """The space of z with x z = aug(x) z for every x, from the literal
    definition over the whole basis; must coincide with the socle."""
    A = H.algebra
    rows = []
    for i, e in enumerate(np.eye(A.dim, dtype=np.int64)):
        M = A.mult_matrix(e).a.copy()
        if i == 0:  # aug(e_0) = 1
            M = (M - np.eye(A.dim, dtype=np.int64)) % A.p
        rows.append(M)
    kern = mat_kernel(FpMatrix(np.vstack(rows), A.p))
    soc = A.socle_vecs()
    if not subspace_eq(kern, soc, A.dim, A.p):
        raise ExactKernelError("internal consistency: integrals differ from the socle")
    return [El(A, v) for v in kern]


# ---------------------------------------------------------------------------
# the Honda tower
# ---------------------------------------------------------------------------


@dataclass
class HondaLevel:
    """Level r of the height-n tower: F_p[x]/(x^{q^r}) with its Hopf data."""

    params: HondaParams
    r: int
    fgl: Fgl
    hopf: HopfStructure = field(repr=False)

    @property
    def algebra(self) -> BorelAlgebra:
        return self.hopf.algebra

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def dim(self) -> int:
        return self.q ** self.r

    def x(self) -> El:
        return self.algebra.gen()

    def socle_exponent(self) -> int:
        return self.q ** self.r - 1


_level_cache: dict[tuple[int, int, int], HondaLevel] = {}
_level_lock = threading.Lock()


def honda_level(params: HondaParams, r: int, budget: int = DEFAULT_BUDGET) -> HondaLevel:
    """Construct (and cache) level r of the tower for (p, n).

    The coproduct generator image is F(x (x) 1, 1 (x) x) with caps q^r and
    the antipode is the formal inverse series; hopf_check passes for every
    constructed level (asserted in the test-suite, not here, to keep
    construction cheap).
    """
    if r < 1:
        raise ExactKernelError("tower level must be >= 1")
    p, n, q = params.p, params.n, params.q
    Q = q ** r
    if Q > budget:
        raise BudgetError("level dimension %d exceeds budget %d" % (Q, budget), required=Q)
    key = (p, n, r)
    with _level_lock:
        hit = _level_cache.get(key)
        if hit is not None:
            return hit
        fgl = honda_fgl(HondaParams(p, n, Q))
        alg = BorelAlgebra(p, (Q,), ("x",))
        square = tensor(alg, alg)
        psi_x = square.algebra.from_exp_dict(
            {(i, j): c for (i, j), c in fgl.F.coeffs.items() if i < Q and j < Q}
        )
        chi_x = alg.from_exp_dict(formal_inverse(fgl, Q).coeffs)
        hopf = HopfStructure(alg, [psi_x.vec], [chi_x.vec])
        level = HondaLevel(params, r, fgl, hopf)
        _level_cache[key] = level
        return level


def is_hopf_map(f: AlgebraMap, src: HopfStructure, tgt: HopfStructure) -> bool:
    """Does the algebra map f commute with coproduct, counit and antipode?
    Checked on generators (all composites are algebra maps)."""
    ff = AlgebraMap.from_generator_images(
        src.square.algebra,
        tgt.square.algebra,
        [tgt.square.emb_left.apply(f.apply(g)) for g in src.algebra.gens()]
        + [tgt.square.emb_right.apply(f.apply(g)) for g in src.algebra.gens()],
    )
    # tensor generator order: left-factor copies come first, then right ones
    for i, g in enumerate(src.algebra.gens()):
        lhs = tgt.coproduct.apply(f.apply(g))
        rhs = ff.apply(src.coproduct.apply(g))
        if lhs != rhs:
            return False
        if f.apply(src.antipode.apply(g)) != tgt.antipode.apply(f.apply(g)):
            return False
        if src.algebra.aug_vec(g.vec) != tgt.algebra.aug_vec(f.apply(g).vec):
            return False
    return True


@dataclass
class TowerMaps:
    surj: AlgebraMap  # H_{r+s} -> H_r,  x -> x
    inj: AlgebraMap  # H_s -> H_{r+s},  x -> x^{q^r}
    surj_is_hopf: bool
    inj_is_hopf: bool
    surj_surjective: bool
    inj_injective: bool


def tower_maps(params: HondaParams, r: int, s: int, budget: int = DEFAULT_BUDGET) -> TowerMaps:
    """The two structure maps between levels r, s and r+s, with their
    Hopf-map and rank diagnostics."""
    if r < 1 or s < 1:
        raise ExactKernelError("levels must be >= 1")
    big = honda_level(params, r + s, budget)
    low = honda_level(params, r, budget)
    mid = honda_level(params, s, budget)
    surj = AlgebraMap.from_generator_images(big.algebra, low.algebra, [low.x()])
    inj = AlgebraMap.from_generator_images(
        mid.algebra, big.algebra, [big.x() ** (params.q ** r)]
    )
    return TowerMaps(
        surj=surj,
        inj=inj,
        surj_is_hopf=is_hopf_map(surj, big.hopf, low.hopf),
        inj_is_hopf=is_hopf_map(inj, mid.hopf, big.hopf),
        surj_surjective=surj.is_surjective(),
        inj_injective=inj.is_injective(),
    )


def multiplication_map(level: HondaLevel, m: int) -> AlgebraMap:
    """The algebra endomorphism x -> [m](x) of H_r."""
    series = m_series(level.fgl, m, level.dim)
    return AlgebraMap.from_generator_images(
        level.algebra, level.algebra, [level.algebra.from_exp_dict(series.coeffs)]
    )


@dataclass
class PdivReport:
    kernel_is_mult_ideal: bool
    p_r_kills_level_r: bool
    square_surjections_compose: bool
    square_inj_quotient_commutes: bool
    square_mult_commutes_with_truncation: bool
    square_mult_factors_through_tower: bool

    @property
    def all_pass(self) -> bool:
        return all(
            (
                self.kernel_is_mult_ideal,
                self.p_r_kills_level_r,
                self.square_surjections_compose,
                self.square_inj_quotient_commutes,
                self.square_mult_commutes_with_truncation,
                self.square_mult_factors_through_tower,
            )
        )

    def as_dict(self) -> dict:
        return {
            "kernel_is_mult_ideal": self.kernel_is_mult_ideal,
            "p_r_kills_level_r": self.p_r_kills_level_r,
            "square_surjections_compose": self.square_surjections_compose,
            "square_inj_quotient_commutes": self.square_inj_quotient_commutes,
            "square_mult_commutes_with_truncation": self.square_mult_commutes_with_truncation,
            "square_mult_factors_through_tower": self.square_mult_factors_through_tower,
            "all_pass": self.all_pass,
        }


def pdiv_check(params: HondaParams, r: int, s: int, budget: int = DEFAULT_BUDGET) -> PdivReport:
    """p-divisibility diagnostics at levels (r, s).

    (i) the kernel of the surjection H_{r+s} -> H_r is the ideal generated
    by the [p^r]-image; (ii) [p^r](x_r) = 0 in H_r; (iii) the compatibility
    squares relating levels r, s, r+s and r+s+1 commute as matrices,
    including the factorization of multiplication by p^r through the tower.
    """
    p, q = params.p, params.q
    Q = q ** (r + s)
    if Q > budget:
        raise BudgetError("pdiv_check needs dimension %d > budget %d" % (Q, budget), required=Q)
    big = honda_level(params, r + s, budget)
    low = honda_level(params, r, budget)
    mid = honda_level(params, s, budget)
    maps = tower_maps(params, r, s, budget)

    # (i) kernel of surj = ideal([p^r](x_{r+s}))
    g = m_series(big.fgl, p ** r, Q)
    gv = big.algebra.from_exp_dict(g.coeffs).vec
    ideal_vecs = []
    eye = np.eye(big.dim, dtype=np.int64)
    for k in range(big.dim):
        ideal_vecs.append(big.algebra.mul_vec(gv, eye[k]))
    ideal_basis = row_space_basis(ideal_vecs, big.dim, p)
    kernel_basis = mat_kernel(maps.surj.as_fpmatrix())
    kernel_ok = subspace_eq(ideal_basis, kernel_basis, big.dim, p)

    # (ii) [p^r](x_r) = 0 in H_r
    kills = m_series(low.fgl, p ** r, low.dim).is_zero()

    # (iii) compatibility squares, algebra side (levels r+s+1 appear)
    bigger = honda_level(params, r + s + 1, max(budget, q ** (r + s + 1)))
    next_mid = honda_level(params, s + 1, budget)

    def down(src: HondaLevel, tgt: HondaLevel) -> AlgebraMap:
        return AlgebraMap.from_generator_images(src.algebra, tgt.algebra, [tgt.x()])

    def up(src: HondaLevel, tgt: HondaLevel, t: int) -> AlgebraMap:
        return AlgebraMap.from_generator_images(src.algebra, tgt.algebra, [tgt.x() ** (q ** t)])

    sq1a = down(bigger, low) == down(big, low).compose(down(bigger, big))
    # H_{s+1} -> H_{r+s}: restrict then include vs include then restrict
    lhs = up(mid, big, r).compose(down(next_mid, mid))
    rhs = down(bigger, big).compose(up(next_mid, bigger, r))
    sq1b = lhs == rhs
    # multiplication by p^{r+1} commutes with truncation H_{r+s+1} -> H_{r+s}
    mlhs = down(bigger, big).compose(multiplication_map(bigger, p ** (r + 1)))
    mrhs = multiplication_map(big, p ** (r + 1)).compose(down(bigger, big))
    sq2a = mlhs == mrhs
    # multiplication by p^r on H_{r+s} factors as inj o surj through H_s
    factor = up(mid, big, r).compose(down(big, mid))
    sq2b = factor == multiplication_map(big, p ** r)

    return PdivReport(
        kernel_is_mult_ideal=kernel_ok,
        p_r_kills_level_r=kills,
        square_surjections_compose=sq1a,
        square_inj_quotient_commutes=sq1b,
        square_mult_commutes_with_truncation=sq2a,
        square_mult_factors_through_tower=sq2b,
    )


def format_tensor_element(H: HopfStructure, el: El) -> str:
    """Pretty tensor notation for an element of H (x) H, e.g. 'x(x)1 + x(x)x'.

    Terms are ordered by total degree with the left factor leading, so the
    level-1 coproduct reads x(x)1 + 1(x)x + ... ."""
    A = H.algebra
    pair = H.square.pair_index
    M = el.vec[pair]
    terms = []
    for a in range(A.dim):
        for b in range(A.dim):
            c = int(M[a, b])
            if c:
                ea, eb = A.basis[a], A.basis[b]
                terms.append(((sum(ea) + sum(eb), sum(eb), eb, ea), a, b, c))
    terms.sort(key=lambda t: t[0])
    bits = []
    for _, a, b, c in terms:
        term = "%s⊗%s" % (_mono_str(A, a), _mono_str(A, b))
        bits.append(term if c == 1 else "%d·%s" % (c, term))
    return " + ".join(bits) if bits else "0"


def _mono_str(A: BorelAlgebra, idx: int) -> str:
    e = A.basis[idx]
    s = "*".join(
        ("%s" % v if k == 1 else "%s^%d" % (v, k)) for v, k in zip(A.var_names, e) if k
    )
    return s or "1"
