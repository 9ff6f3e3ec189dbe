"""The Green functor engine.

Values on abelian p-groups are tensor products of Honda tower levels
(Kuenneth); restriction along an arbitrary homomorphism of abelian p-groups
is assembled from the tower structure maps through the coproduct (the dual
of group multiplication); transfers are Gysin maps for the canonical
Frobenius forms; values on a general finite group G with abelian Sylow
p-subgroup P are computed inside A(P) by the stable elements formula, with
the colimit formula and the invariant-subalgebra computation as
independent cross-checks.

Orientation conventions: a group homomorphism alpha: G -> H induces
restrict(alpha): A(H) -> A(G); conjugation c_g: A(H) -> A(gHg^{-1}) is
restriction along gHg^{-1} -> H, x -> g^{-1} x g; for a general group the
value A(G) is a subalgebra of A(P) and res^G_P is the inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactkernel import (
    BudgetError,
    ExactKernelError,
    FpMatrix,
    ScopeError,
    mat_kernel,
    row_space_basis,
    subspace_contains,
    subspace_intersect,
)
from .borel import AlgebraMap, BorelAlgebra, El, Subalgebra
from .fgl import HondaParams, m_series
from .frobform import FrobeniusForm, canonical_form, gysin
from .grp import (
    AbelianHom,
    AbelianPGroup,
    PermGroup,
    abelian_decompose,
    double_cosets,
    hom_between,
    perm_inv,
    perm_mul,
    sylow,
)
from .hopftower import HondaLevel, honda_level

DEFAULT_SIZE_BUDGET = 256


@dataclass
class StableResult:
    """Output of the stable-elements computation inside A(P)."""

    sylow: AbelianPGroup
    value_algebra: BorelAlgebra
    lim_basis: list
    colim_dim: int
    subalgebra: Subalgebra

    @property
    def lim_dim(self) -> int:
        return len(self.lim_basis)


@dataclass
class GreenValue:
    """A(G) together with its canonical Frobenius form and ind^G_1(1)."""

    kind: str  # "abelian" | "general" | "trivial"
    p: int
    n: int
    algebra: object  # BorelAlgebra | Subalgebra
    form: FrobeniusForm
    ind_one: El
    abelian_type: tuple | None = None
    group: PermGroup | None = None
    sylow_decomp: AbelianPGroup | None = None
    stable: StableResult | None = None
    levels: tuple = ()

    @property
    def dim(self) -> int:
        return self.algebra.dim


def _params(p: int, n: int, trunc: int) -> HondaParams:
    return HondaParams(p, n, max(trunc, p ** n))


def _trivial_algebra(p: int) -> BorelAlgebra:
    return BorelAlgebra(p, ())


def augmentation_map(A) -> AlgebraMap:
    """The counit A -> F_p as an AlgebraMap (it is an algebra map)."""
    F = _trivial_algebra(A.p)
    row = np.zeros((1, A.dim), dtype=np.int64)
    for i, e in enumerate(np.eye(A.dim, dtype=np.int64)):
        row[0, i] = A.aug_vec(e)
    return AlgebraMap(A, F, row, is_algebra_map=True)


def unit_map(A) -> AlgebraMap:
    F = _trivial_algebra(A.p)
    col = A.one_vec().reshape(-1, 1)
    return AlgebraMap(F, A, col, is_algebra_map=True)


_value_cache: dict = {}


def value_abelian(exponents, p: int, n: int, budget: int = DEFAULT_SIZE_BUDGET) -> GreenValue:
    """A(G) for the abelian p-group of type (r_1 >= ... >= r_k): the tensor
    of the tower levels H_{r_i}, its canonical form, and ind^G_1(1)."""
    exponents = tuple(int(r) for r in exponents)
    if any(r < 1 for r in exponents):
        raise ExactKernelError("abelian type entries must be >= 1")
    q = p ** n
    dim = q ** sum(exponents)
    if dim > budget:
        raise BudgetError("value dimension %d exceeds budget %d" % (dim, budget), required=dim)
    cached = _value_cache.get((exponents, p, n))
    if cached is not None:
        return cached
    levels = tuple(honda_level(_params(p, n, q ** r), r, budget=max(budget, q ** r)) for r in exponents)
    profile = tuple(q ** r for r in exponents)
    names = ("x",) if len(profile) == 1 else tuple("x%d" % (i + 1) for i in range(len(profile)))
    A = BorelAlgebra(p, profile, names)
    form = canonical_form(A)
    if exponents:
        ind_one = gysin(augmentation_map(A), form, canonical_form(_trivial_algebra(p))).apply(
            _trivial_algebra(p).one()
        )
    else:
        ind_one = A.one()
    if ind_one.is_zero() or not subspace_contains(A.socle_vecs(), ind_one.vec, p):
        raise ExactKernelError("internal consistency: ind_one misses the socle")
    out = GreenValue(
        kind="abelian",
        p=p,
        n=n,
        algebra=A,
        form=form,
        ind_one=ind_one,
        abelian_type=exponents,
        levels=levels,
    )
    _value_cache[(exponents, p, n)] = out
    return out


def value_for_decomposition(dec: AbelianPGroup, p: int, n: int,
                            budget: int = DEFAULT_SIZE_BUDGET) -> GreenValue:
    v = value_abelian(dec.exponents, p, n, budget)
    return GreenValue(
        kind=v.kind, p=p, n=n, algebra=v.algebra, form=v.form, ind_one=v.ind_one,
        abelian_type=v.abelian_type, group=dec.group, sylow_decomp=dec, levels=v.levels,
    )


# ---------------------------------------------------------------------------
# restriction along homomorphisms of abelian p-groups
# ---------------------------------------------------------------------------


def _psi_power_matrices(level: HondaLevel) -> list[np.ndarray]:
    """Coefficient matrices of psi(x)^e in H (x) H for e < dim."""
    T2 = level.hopf.square.algebra
    pair = level.hopf.square.pair_index
    out = [T2.one_vec()[pair]]
    cur = T2.one_vec()
    psi = level.hopf.coproduct_gens[0].vec
    for _ in range(level.dim - 1):
        cur = T2.mul_vec(cur, psi)
        out.append(cur[pair])
    return out


def _iterated_coproduct(level: HondaLevel, slots: int) -> dict:
    """Terms of the (slots-1)-fold coproduct of the generator x, as a dict
    {(e_1..e_slots): coeff}; slots >= 1."""
    powers = _psi_power_matrices(level)
    p = level.algebra.p
    terms = {(1,): 1}
    for _ in range(slots - 1):
        new: dict = {}
        for key, c in terms.items():
            M = powers[key[0]]
            for a, b in zip(*np.nonzero(M)):
                k2 = (int(a), int(b)) + key[1:]
                new[k2] = (new.get(k2, 0) + c * int(M[a, b])) % p
        terms = {k: v for k, v in new.items() if v}
    return terms


def _component_power_table(src_level: HondaLevel, r_i: int, s_j: int, m: int, p: int, n: int,
                           out_cap: int, slots_cap: int) -> list[np.ndarray]:
    """Powers (as coefficient vectors in H_{r_i}) of the component image of
    the generator of H_{s_j} under the hom C_{p^{r_i}} -> C_{p^{s_j}},
    g -> h^m: the image is [m'](x^{q^{max(r_i - s_j, 0)}})."""
    q = p ** n
    t = max(s_j - r_i, 0)
    pt = p ** t
    if m % pt:
        raise ExactKernelError("internal consistency: hom fails its congruence")
    m_prime = m // pt
    u = max(r_i - s_j, 0)
    series = m_series(src_level.fgl, m_prime, out_cap)
    vec = np.zeros(out_cap, dtype=np.int64)
    for (e,), c in series.coeffs.items():
        ee = e * (q ** u)
        if ee < out_cap:
            vec[ee] = c
    # power table up to slots_cap - 1
    table = [np.zeros(out_cap, dtype=np.int64)]
    table[0][0] = 1
    cur = table[0]
    for _ in range(slots_cap - 1):
        cur = np.convolve(cur, vec)[:out_cap] % p
        table.append(cur)
    return table


def restrict(alpha: AbelianHom, p: int, n: int, budget: int = DEFAULT_SIZE_BUDGET) -> AlgebraMap:
    """The algebra map A(alpha.target) -> A(alpha.source).

    Each generator of the target value is sent through the iterated
    coproduct of its tower level, one tensor slot per cyclic factor of the
    source; slot i is pushed through the cyclic-component map and the
    results are multiplied in A(source).
    """
    src, tgt = alpha.source, alpha.target
    v_src = value_for_decomposition(src, p, n, budget)
    v_tgt = value_for_decomposition(tgt, p, n, budget)
    A_src: BorelAlgebra = v_src.algebra
    A_tgt: BorelAlgebra = v_tgt.algebra
    q = p ** n
    k = src.rank
    images = []
    for j in range(tgt.rank):
        s_j = tgt.exponents[j]
        level_j = v_tgt.levels[j]
        if k == 0:
            images.append(A_src.zero())
            continue
        delta = _iterated_coproduct(level_j, k)
        # per-slot power tables of the component generator images
        tables = []
        for i in range(k):
            r_i = src.exponents[i]
            m = alpha.matrix[j][i]
            tables.append(
                _component_power_table(
                    v_src.levels[i], r_i, s_j, m, p, n, out_cap=q ** r_i, slots_cap=q ** s_j
                )
            )
        out = np.zeros(A_src.dim, dtype=np.int64)
        for key, c in delta.items():
            partial = [((), int(c))]
            dead = False
            for i in range(k):
                vec_i = tables[i][key[i]]
                support = np.nonzero(vec_i)[0]
                if len(support) == 0:
                    dead = True
                    break
                partial = [
                    (exps + (int(e),), (coeff * int(vec_i[e])) % p)
                    for exps, coeff in partial
                    for e in support
                ]
            if dead:
                continue
            for exps, coeff in partial:
                out[A_src.index[exps]] = (out[A_src.index[exps]] + coeff) % p
        images.append(El(A_src, out))
    return AlgebraMap.from_generator_images(A_tgt, A_src, images)


def transfer(f: AlgebraMap, form_source: FrobeniusForm | None = None,
             form_target: FrobeniusForm | None = None) -> AlgebraMap:
    """The Gysin transfer along the (restriction) algebra map f: A -> B,
    i.e. the module map B -> A adjoint for the canonical forms."""
    lam_A = form_source or canonical_form(f.source)
    lam_B = form_target or canonical_form(f.target)
    return gysin(f, lam_A, lam_B)


# ---------------------------------------------------------------------------
# stable elements
# ---------------------------------------------------------------------------


def _inclusion_hom(sub: AbelianPGroup, amb: AbelianPGroup) -> AbelianHom:
    return hom_between(sub, amb, list(sub.basis))


def _conjugation_hom(src: AbelianPGroup, tgt: AbelianPGroup, g) -> AbelianHom:
    """The hom src -> tgt, x -> g^{-1} x g (requires g^{-1} src g = tgt)."""
    gi = perm_inv(g)
    images = [perm_mul(perm_mul(gi, b), g) for b in src.basis]
    return hom_between(src, tgt, images)


def stable_elements(G: PermGroup, p: int, n: int,
                    budget: int = DEFAULT_SIZE_BUDGET) -> StableResult:
    """A(G) inside A(P) for P a Sylow p-subgroup: the simultaneous kernel of
    res - c_g res over double cosets P\\G/P, with the colimit dimension from
    the transfer-difference images recorded alongside."""
    P = sylow(G, p)
    if not P.is_abelian():
        raise ScopeError("Sylow %d-subgroup is non-abelian: out of modeled scope" % p)
    dec_P = abelian_decompose(P) if P.order > 1 else AbelianPGroup(P, p, (), ())
    v_P = value_for_decomposition(dec_P, p, n, budget)
    A_P: BorelAlgebra = v_P.algebra
    reps = double_cosets(G, P, P)
    kernels = []
    images = []
    for g in reps:
        gi = perm_inv(g)
        Hg = P.intersection(G.conjugate_subgroup(P, g))   # gPg^{-1} cap P
        Kg = P.intersection(G.conjugate_subgroup(P, gi))  # P cap g^{-1}Pg
        dec_H = abelian_decompose(Hg) if Hg.order > 1 else AbelianPGroup(Hg, p, (), ())
        dec_K = abelian_decompose(Kg) if Kg.order > 1 else AbelianPGroup(Kg, p, (), ())
        res_H = restrict(_inclusion_hom(dec_H, dec_P), p, n, budget)
        res_K = restrict(_inclusion_hom(dec_K, dec_P), p, n, budget)
        cg = restrict(_conjugation_hom(dec_H, dec_K, g), p, n, budget)  # A(Kg) -> A(Hg)
        diff = res_H - cg.compose(res_K)
        kernels.append(mat_kernel(diff.as_fpmatrix()))
        # colimit side: ind^P_H - ind^P_K o c_{g^{-1}}
        ind_H = transfer(res_H)
        ind_K = transfer(res_K)
        cginv = restrict(_conjugation_hom(dec_K, dec_H, gi), p, n, budget)  # A(Hg) -> A(Kg)
        d2 = ind_H - ind_K.compose(cginv)
        for col in d2.matrix.T:
            images.append(col % p)
    lim_basis = subspace_intersect(kernels, A_P.dim, p)
    if not subspace_contains(lim_basis, A_P.one_vec(), p):
        raise ExactKernelError("internal consistency: 1 is not stable")
    sub = Subalgebra(A_P, lim_basis)  # constructor asserts multiplicative closure
    img_span = row_space_basis(images, A_P.dim, p)
    colim_dim = A_P.dim - len(img_span)
    return StableResult(
        sylow=dec_P,
        value_algebra=A_P,
        lim_basis=lim_basis,
        colim_dim=colim_dim,
        subalgebra=sub,
    )


def invariants(P_value: GreenValue, actions) -> Subalgebra:
    """Common fixed subalgebra of a family of algebra automorphisms of A(P);
    the independent cross-check for stable elements over a normal Sylow."""
    A = P_value.algebra
    fixed = [np.eye(A.dim, dtype=np.int64)[i] for i in range(A.dim)]
    for sigma in actions:
        if sigma.source != A or sigma.target != A:
            raise ExactKernelError("action endpoints must be A(P)")
        if not sigma.is_algebra_map or not sigma.is_injective():
            raise ExactKernelError("actions must be algebra automorphisms")
        eye = np.eye(A.dim, dtype=np.int64)
        diff = FpMatrix((sigma.matrix - eye) % A.p, A.p)
        fixed = subspace_intersect([fixed, mat_kernel(diff)], A.dim, A.p)
    return Subalgebra(A, fixed)


def value_general(G: PermGroup, p: int, n: int,
                  budget: int = DEFAULT_SIZE_BUDGET) -> GreenValue:
    """A(G) for any modeled finite group: F_p when p does not divide |G|,
    else the stable subalgebra of A(P) with its own canonical form."""
    if G.order % p != 0:
        F = _trivial_algebra(p)
        form = canonical_form(F)
        return GreenValue(
            kind="trivial", p=p, n=n, algebra=F, form=form, ind_one=F.one(), group=G,
        )
    if G.order == sylow(G, p).order and G.is_abelian():
        dec = abelian_decompose(G)
        v = value_for_decomposition(dec, p, n, budget)
        return v
    st = stable_elements(G, p, n, budget)
    sub = st.subalgebra
    form = canonical_form(sub)
    ind_one = gysin(
        augmentation_map(sub), form, canonical_form(_trivial_algebra(p))
    ).apply(_trivial_algebra(p).one())
    if ind_one.is_zero():
        raise ExactKernelError("internal consistency: ind_one vanished")
    return GreenValue(
        kind="general", p=p, n=n, algebra=sub, form=form, ind_one=ind_one,
        group=G, sylow_decomp=st.sylow, stable=st,
    )


# ---------------------------------------------------------------------------
# inflation inverses (pushforward along p'-kernel epimorphisms)
# ---------------------------------------------------------------------------


def hom_by_generator_images(G: PermGroup, H: PermGroup, images) -> dict:
    """The homomorphism G -> H with the given generator images, as an
    element map; multiplicativity is verified exhaustively."""
    if len(images) != len(G.generators):
        raise ExactKernelError("need one image per generator")
    table = {G.identity(): H.identity()}
    frontier = [G.identity()]
    gen_img = {g: tuple(img) for g, img in zip(G.generators, images)}
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in gen_img.items():
                y = perm_mul(g, x)
                if y not in table:
                    table[y] = perm_mul(img, table[x])
                    nxt.append(y)
        frontier = nxt
    if len(table) != G.order:
        raise ExactKernelError("generator walk did not cover the group")
    for a in G.elements:
        for b in G.elements:
            if table[perm_mul(a, b)] != perm_mul(table[a], table[b]):
                raise ExactKernelError("images do not define a homomorphism")
    return table


def inflation_inverse(G: PermGroup, H: PermGroup, beta: dict, p: int, n: int,
                      budget: int = DEFAULT_SIZE_BUDGET):
    """For an epimorphism beta: G ->> H with p' kernel, the pushforward
    beta_* = (beta^*)^{-1}: A(G) -> A(H).

    Returns (beta_star: A(H) -> A(G), beta_lower_star: A(G) -> A(H)).
    """
    image = {tuple(v) for v in beta.values()}
    if image != set(H.elements):
        raise ExactKernelError("beta is not an epimorphism onto H")
    ker = [g for g in G.elements if beta[g] == H.identity()]
    if len(ker) % p == 0:
        raise ExactKernelError("kernel order is divisible by p")
    v_G = value_general(G, p, n, budget)
    v_H = value_general(H, p, n, budget)
    bstar = induced_map(G, H, beta, v_G, v_H, p, n, budget)
    M = bstar.as_fpmatrix()
    if M.rows != M.cols or M.rank() != M.rows:
        raise ExactKernelError(
            "internal consistency: the induced map of a p'-kernel epimorphism "
            "must be a linear isomorphism"
        )
    inv = M.inv()
    blower = AlgebraMap(v_G.algebra, v_H.algebra, inv.a, is_algebra_map=True)
    return bstar, blower


def induced_map(G: PermGroup, H: PermGroup, beta: dict, v_G: GreenValue, v_H: GreenValue,
                p: int, n: int, budget: int = DEFAULT_SIZE_BUDGET) -> AlgebraMap:
    """beta^*: A(H) -> A(G) for beta: G -> H via stable-elements
    functoriality: push the Sylow of G into the chosen Sylow of H (up to an
    inner twist, which acts trivially on stable elements)."""
    if v_G.kind == "trivial":
        if v_H.kind != "trivial":
            # A(H) -> F_p is the augmentation
            return augmentation_map(v_H.algebra)
        return AlgebraMap.identity(v_G.algebra)
    P_G = v_G.sylow_decomp if v_G.sylow_decomp is not None else abelian_decompose(G)
    dec_G = P_G
    PG_grp = dec_G.group
    imgPG = H.subgroup([beta[g] for g in PG_grp.generators] or [])
    if v_H.kind == "trivial":
        raise ExactKernelError("no map: target value trivial but source Sylow nontrivial")
    dec_H = v_H.sylow_decomp if v_H.sylow_decomp is not None else abelian_decompose(H)
    PH_grp = dec_H.group
    if imgPG.order != PH_grp.order:
        raise ExactKernelError("beta does not carry the Sylow isomorphically")
    twist = None
    for t in H.elements:
        if H.conjugate_subgroup(imgPG, t) == PH_grp:
            twist = t
            break
    if twist is None:
        raise ExactKernelError("internal consistency: Sylow images not conjugate")
    ti = perm_inv(twist)
    images = [perm_mul(perm_mul(twist, beta[b]), ti) for b in dec_G.basis]
    alpha = hom_between(dec_G, dec_H, images)
    full = restrict(alpha, p, n, budget)  # A(P_H) -> A(P_G)
    return _restrict_to_stable(full, v_H, v_G)


class SubgroupGreenFunctor:
    """Mackey/Green data on the subgroups of a fixed finite group G.

    Values are cached per subgroup; res/ind/c_g between subgroups are built
    by transporting through chosen Sylow subgroups (the inner twist used to
    align Sylows acts trivially on stable elements, so the choice drops
    out).  ind is always the Gysin transfer for the canonical forms.
    """

    def __init__(self, G: PermGroup, p: int, n: int, budget: int = DEFAULT_SIZE_BUDGET):
        self.G = G
        self.p = p
        self.n = n
        self.budget = budget
        self._values: dict = {}
        self._res_cache: dict = {}
        self._ind_cache: dict = {}
        self._conj_cache: dict = {}

    def _key(self, H: PermGroup):
        return frozenset(H.elements)

    def value(self, H: PermGroup) -> GreenValue:
        k = self._key(H)
        if k not in self._values:
            self._values[k] = value_general(H, self.p, self.n, self.budget)
        return self._values[k]

    def _sylow_decomp(self, v: GreenValue, H: PermGroup) -> AbelianPGroup:
        if v.sylow_decomp is not None:
            return v.sylow_decomp
        P = sylow(H, self.p)
        return abelian_decompose(P) if P.order > 1 else AbelianPGroup(P, self.p, (), ())

    def res(self, H: PermGroup, K: PermGroup) -> AlgebraMap:
        """res^H_K: A(H) -> A(K) for K <= H."""
        if not K.is_subgroup_of(H):
            raise ExactKernelError("res needs K <= H")
        ck = (self._key(H), self._key(K))
        if ck in self._res_cache:
            return self._res_cache[ck]
        vH, vK = self.value(H), self.value(K)
        if vK.kind == "trivial":
            out = augmentation_map(vH.algebra)
        else:
            decK = self._sylow_decomp(vK, K)
            decH = self._sylow_decomp(vH, H)
            PK, PH = decK.group, decH.group
            twist = None
            for h in H.elements:
                if H.conjugate_subgroup(PK, h).is_subgroup_of(PH):
                    twist = h
                    break
            if twist is None:
                raise ExactKernelError("internal consistency: Sylow transport failed")
            ti = perm_inv(twist)
            # hom P_K -> P_H, x -> h x h^{-1}
            alpha = hom_between(decK, decH, [perm_mul(perm_mul(twist, b), ti) for b in decK.basis])
            full = restrict(alpha, self.p, self.n, self.budget)  # A(P_H) -> A(P_K)
            out = _restrict_to_stable(full, vH, vK)
        self._res_cache[ck] = out
        return out

    def ind(self, H: PermGroup, K: PermGroup) -> AlgebraMap:
        """ind^H_K: A(K) -> A(H), the Gysin transfer of res^H_K."""
        ck = (self._key(H), self._key(K))
        if ck in self._ind_cache:
            return self._ind_cache[ck]
        vH, vK = self.value(H), self.value(K)
        out = transfer(self.res(H, K), vH.form, vK.form)
        self._ind_cache[ck] = out
        return out

    def conj(self, g, H: PermGroup) -> AlgebraMap:
        """c_g: A(H) -> A(gHg^{-1})."""
        g = tuple(g)
        if g not in self.G:
            raise ExactKernelError("conjugating element must lie in G")
        ck = (g, self._key(H))
        if ck in self._conj_cache:
            return self._conj_cache[ck]
        H2 = self.G.conjugate_subgroup(H, g)
        vH, vH2 = self.value(H), self.value(H2)
        if vH.kind == "trivial":
            out = AlgebraMap.identity(vH.algebra)
            self._conj_cache[ck] = out
            return out
        decH = self._sylow_decomp(vH, H)
        decH2 = self._sylow_decomp(vH2, H2)
        gi = perm_inv(g)
        moved = self.G.conjugate_subgroup(decH2.group, gi)  # g^{-1} P_{H2} g <= H
        twist = None
        for h in H.elements:
            if H.conjugate_subgroup(moved, h) == decH.group:
                twist = h
                break
        if twist is None:
            raise ExactKernelError("internal consistency: Sylow conjugation failed")
        ti = perm_inv(twist)
        # hom P_{H2} -> P_H, x -> h g^{-1} x g h^{-1}
        images = [perm_mul(perm_mul(perm_mul(perm_mul(twist, gi), b), g), ti) for b in decH2.basis]
        alpha = hom_between(decH2, decH, images)
        full = restrict(alpha, self.p, self.n, self.budget)  # A(P_H) -> A(P_{H2})
        out = _restrict_to_stable(full, vH, vH2)
        self._conj_cache[ck] = out
        return out


def _restrict_to_stable(full: AlgebraMap, v_src: GreenValue, v_tgt: GreenValue) -> AlgebraMap:
    """Restrict a map A(P_src) -> A(P_tgt) to the stable values
    A(src) -> A(tgt), asserting that stable vectors map to stable vectors."""
    src_alg = v_src.algebra
    tgt_alg = v_tgt.algebra
    src_amb = isinstance(src_alg, Subalgebra)
    tgt_amb = isinstance(tgt_alg, Subalgebra)
    cols = []
    dim = src_alg.dim
    for i in range(dim):
        e = np.zeros(dim, dtype=np.int64)
        e[i] = 1
        amb = src_alg.from_sub(e) if src_amb else e
        vec = full.apply(El(full.source, amb)).vec
        if tgt_amb:
            vec = tgt_alg.to_sub(vec)  # raises if the image is not stable
        cols.append(vec)
    return AlgebraMap(src_alg, tgt_alg, np.array(cols).T,
                      is_algebra_map=full.is_algebra_map)
