"""Finite-dimensional local augmented commutative GF(p)-algebras in Borel
form k[x_1..x_l]/(x_i^{q_i}), their subalgebras, and linear/algebra maps.

The monomial basis is ordered graded-lexicographically on exponent vectors,
so index 0 is the constant monomial (augmentation = coefficient 0) and the
last index is the top monomial x_1^{q_1-1}...x_l^{q_l-1}.

Element vectors are numpy int64 coordinate arrays.  Products use a cached
dim x dim index table for small algebras and a Kronecker-substitution
big-integer convolution for large ones (tensor squares of Hopf levels).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactkernel import (
    ExactKernelError,
    FpMatrix,
    TruncPoly,
    _check_prime,
    mat_kernel,
    row_space_basis,
    subspace_contains,
)

_TABLE_LIMIT = 320  # above this dimension, products go through the Kronecker path


def _is_p_power(q: int, p: int) -> bool:
    if q < p:
        return False
    while q % p == 0:
        q //= p
    return q == 1


class El:
    """An element of a local algebra, as a coordinate vector over its basis."""

    __slots__ = ("algebra", "vec")

    def __init__(self, algebra, vec):
        self.algebra = algebra
        self.vec = np.asarray(vec, dtype=np.int64) % algebra.p
        if self.vec.shape != (algebra.dim,):
            raise ExactKernelError("coordinate vector has wrong length")

    def _coerce(self, other) -> "El":
        if isinstance(other, El):
            if other.algebra != self.algebra:
                raise ExactKernelError("elements of different algebras")
            return other
        return El(self.algebra, self.algebra.one_vec() * (int(other) % self.algebra.p))

    def __add__(self, other):
        o = self._coerce(other)
        return El(self.algebra, self.vec + o.vec)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return El(self.algebra, self.vec - o.vec)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return El(self.algebra, -self.vec)

    def __mul__(self, other):
        if isinstance(other, El):
            if other.algebra != self.algebra:
                raise ExactKernelError("elements of different algebras")
            return El(self.algebra, self.algebra.mul_vec(self.vec, other.vec))
        return El(self.algebra, self.vec * (int(other) % self.algebra.p))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        res = self.algebra.one()
        base = self
        while k:
            if k & 1:
                res = res * base
            k >>= 1
            if k:
                base = base * base
        return res

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        return (
            isinstance(other, El)
            and other.algebra == self.algebra
            and bool(np.array_equal(self.vec, other.vec))
        )

    def is_zero(self) -> bool:
        return not self.vec.any()

    def aug(self) -> int:
        return self.algebra.aug_vec(self.vec)

    def is_unit(self) -> bool:
        return self.aug() != 0

    def inv(self) -> "El":
        """Inverse via geometric series on the nilpotent part:
        (c(1 + z))^{-1} = c^{-1}(1 - z + z^2 - ...)."""
        a = self.algebra
        c = self.aug()
        if c == 0:
            raise ExactKernelError("element is nilpotent, not invertible")
        cinv = pow(c, -1, a.p)
        z = El(a, (self.vec * cinv) % a.p) - a.one()
        acc = a.one()
        term = a.one()
        sign = -1
        while True:
            term = term * z
            if term.is_zero():
                break
            acc = acc + term * sign
            sign = -sign
        return acc * cinv

    def __repr__(self):
        return str(self.to_poly())

    def to_poly(self) -> TruncPoly:
        a = self.algebra
        if hasattr(a, "ambient"):  # Subalgebra element: print its ambient image
            return a.element_to_ambient(self).to_poly()
        if not a.profile:
            d = {(): int(self.vec[0])} if self.vec[0] else {}
            return TruncPoly((), (), d, a.p)
        return TruncPoly(
            a.var_names,
            a.profile,
            {a.basis[i]: int(c) for i, c in enumerate(self.vec) if c},
            a.p,
        )


class _LocalAlgebraOps:
    """Shared derived operations; concrete classes provide p, dim, one_vec,
    aug_vec, mul_vec and radical_span_vecs."""

    def one(self) -> El:
        return El(self, self.one_vec())

    def zero(self) -> El:
        return El(self, np.zeros(self.dim, dtype=np.int64))

    def element(self, vec) -> El:
        return El(self, vec)

    def scalar(self, c: int) -> El:
        return El(self, self.one_vec() * (int(c) % self.p))

    def basis_elements(self) -> list[El]:
        return [El(self, v) for v in np.eye(self.dim, dtype=np.int64)]

    def mult_matrix(self, vec) -> FpMatrix:
        """Matrix of left multiplication by the element with these coords."""
        vec = np.asarray(vec, dtype=np.int64) % self.p
        table = getattr(self, "_table", None)
        if table is not None:
            M = np.zeros((self.dim, self.dim), dtype=np.int64)
            for i in np.nonzero(vec)[0]:
                row = table[i]
                valid = row >= 0
                np.add.at(M, (row[valid], np.nonzero(valid)[0]), int(vec[i]))
            return FpMatrix(M, self.p)
        cols = [self.mul_vec(vec, e) for e in np.eye(self.dim, dtype=np.int64)]
        return FpMatrix(np.array(cols).T, self.p)

    def socle_vecs(self) -> list[np.ndarray]:
        """Basis of the annihilator of the maximal ideal, via the kernel of
        stacked multiplication matrices of a radical spanning set."""
        rad = self.radical_span_vecs()
        if not rad:
            return [self.one_vec()]
        stacked = np.vstack([self.mult_matrix(v).a for v in rad])
        return mat_kernel(FpMatrix(stacked, self.p))

    def socle_basis(self) -> list[El]:
        return [El(self, v) for v in self.socle_vecs()]

    def radical_vecs(self) -> list[np.ndarray]:
        """Basis of ker(aug)."""
        return self.radical_span_vecs()

    def nilpotency_exponent(self) -> int:
        """Least e with m^e = 0, computed by repeated span products."""
        span = self.radical_span_vecs()
        e = 1
        while span:
            nxt = []
            for u in span:
                for g in self.radical_span_vecs():
                    nxt.append(self.mul_vec(u, g))
            span = row_space_basis(nxt, self.dim, self.p)
            e += 1
            if e > self.dim + 1:
                raise ExactKernelError("radical fails to be nilpotent")
        return e


@dataclass(frozen=True)
class TensorProduct:
    """Result of a Kuenneth tensor: the product algebra, the two canonical
    embeddings, and the (i, j) -> basis-index table used by coproducts."""

    algebra: "BorelAlgebra"
    emb_left: "AlgebraMap"
    emb_right: "AlgebraMap"
    pair_index: np.ndarray


class BorelAlgebra(_LocalAlgebraOps):
    """k[x_1..x_l]/(x_1^{q_1},..,x_l^{q_l}) over GF(p) on the monomial basis."""

    def __init__(self, p: int, profile, var_names=None):
        _check_prime(p)
        profile = tuple(int(q) for q in profile)
        for q in profile:
            if not _is_p_power(q, p):
                raise ExactKernelError("profile entry %d is not a positive power of %d" % (q, p))
        self.p = p
        self.profile = profile
        self.nvars = len(profile)
        if var_names is None:
            var_names = tuple("x%d" % (i + 1) for i in range(self.nvars)) if self.nvars != 1 else ("x",)
        self.var_names = tuple(var_names)
        if len(self.var_names) != self.nvars:
            raise ExactKernelError("need one variable name per profile entry")
        dim = 1
        for q in profile:
            dim *= q
        self.dim = dim
        exps = [()]
        for q in profile:
            exps = [e + (k,) for e in exps for k in range(q)]
        exps.sort(key=lambda e: (sum(e), e))
        self.basis: list[tuple] = exps
        self.index: dict[tuple, int] = {e: i for i, e in enumerate(exps)}
        # multiplication structure
        if dim <= _TABLE_LIMIT:
            table = np.full((dim, dim), -1, dtype=np.int64)
            for i, ei in enumerate(exps):
                for j, ej in enumerate(exps):
                    e = tuple(a + b for a, b in zip(ei, ej))
                    if all(a < q for a, q in zip(e, profile)):
                        table[i, j] = self.index[e]
            self._table = table
            self._kron = None
        else:
            self._table = None
            radix = [2 * q - 1 for q in profile]
            enc = np.zeros(dim, dtype=np.int64)
            weights = []
            w = 1
            for r in radix:
                weights.append(w)
                w *= r
            self._kron_size = w
            for i, e in enumerate(exps):
                enc[i] = sum(a * wt for a, wt in zip(e, weights))
            dec = np.full(w, -1, dtype=np.int64)
            dec[enc] = np.arange(dim)
            self._kron = (enc, dec)

    def __eq__(self, other):
        return (
            isinstance(other, BorelAlgebra)
            and self.p == other.p
            and self.profile == other.profile
            and self.var_names == other.var_names
        )

    def __hash__(self):
        return hash((self.p, self.profile, self.var_names))

    def __repr__(self):
        if not self.profile:
            return "BorelAlgebra(F_%d)" % self.p
        rel = ", ".join("%s^%d" % (v, q) for v, q in zip(self.var_names, self.profile))
        return "BorelAlgebra(F_%d[%s]/(%s))" % (self.p, ", ".join(self.var_names), rel)

    # -- primitive operations -----------------------------------------------

    def one_vec(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] = 1
        return v

    def aug_vec(self, vec) -> int:
        return int(vec[0])

    def mul_vec(self, u, v) -> np.ndarray:
        p = self.p
        if self._table is not None:
            outer = (np.outer(u, v) % p).ravel()
            tgt = self._table.ravel()
            mask = (tgt >= 0) & (outer != 0)
            out = np.zeros(self.dim, dtype=np.int64)
            np.add.at(out, tgt[mask], outer[mask])
            return out % p
        enc, dec = self._kron
        a = np.zeros(self._kron_size, dtype=np.int64)
        b = np.zeros(self._kron_size, dtype=np.int64)
        a[enc] = u % p
        b[enc] = v % p
        ia = int.from_bytes(a.astype("<u8").tobytes(), "little")
        ib = int.from_bytes(b.astype("<u8").tobytes(), "little")
        prod = ia * ib
        nbytes = 2 * self._kron_size * 8
        raw = prod.to_bytes(nbytes, "little")
        c = np.frombuffer(raw, dtype="<u8").astype(np.int64) % p
        # keep positions whose mixed-radix digits all stay below the caps;
        # digit-overflow positions are exactly the capped monomials
        out = np.zeros(self.dim, dtype=np.int64)
        valid = np.nonzero(dec >= 0)[0]
        out[dec[valid]] = c[valid]
        return out

    def radical_span_vecs(self) -> list[np.ndarray]:
        out = []
        for i in range(self.nvars):
            e = tuple(1 if j == i else 0 for j in range(self.nvars))
            v = np.zeros(self.dim, dtype=np.int64)
            v[self.index[e]] = 1
            out.append(v)
        return out

    # -- convenience ---------------------------------------------------------

    def gen(self, i: int = 0) -> El:
        e = tuple(1 if j == i else 0 for j in range(self.nvars))
        return self.monomial(e)

    def gens(self) -> list[El]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, e) -> El:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.index[tuple(e)]] = 1
        return El(self, v)

    def top_monomial(self) -> El:
        return El(self, np.eye(self.dim, dtype=np.int64)[self.dim - 1])

    def from_exp_dict(self, d) -> El:
        v = np.zeros(self.dim, dtype=np.int64)
        for e, c in d.items():
            v[self.index[tuple(e)]] = (v[self.index[tuple(e)]] + int(c)) % self.p
        return El(self, v)

    def from_poly(self, f: TruncPoly) -> El:
        return self.from_exp_dict(f.coeffs)

    def to_json(self) -> dict:
        return {"p": self.p, "profile": list(self.profile), "vars": list(self.var_names)}

    def element_to_json(self, el: El) -> dict:
        return {
            "".join("%s^%d " % (v, k) for v, k in zip(self.var_names, e) if k).strip() or "1": int(c)
            for e, c in ((self.basis[i], el.vec[i]) for i in range(self.dim))
            if c
        }


def make_algebra(p: int, profile, var_names=None) -> BorelAlgebra:
    """The Borel algebra with the given p-power profile."""
    return BorelAlgebra(p, profile, var_names)


def tensor(A: BorelAlgebra, B: BorelAlgebra) -> TensorProduct:
    """Kuenneth tensor product with canonical embeddings.

    The result has the concatenated profile; variable names are suffixed
    where they would collide.
    """
    if A.p != B.p:
        raise ExactKernelError("tensor factors over different primes")
    names = list(A.var_names) + list(B.var_names)
    if len(set(names)) != len(names):
        names = ["%sL" % v for v in A.var_names] + ["%sR" % v for v in B.var_names]
    C = BorelAlgebra(A.p, A.profile + B.profile, tuple(names))
    zl = (0,) * B.nvars
    zr = (0,) * A.nvars
    emb_left = AlgebraMap.from_generator_images(
        A, C, [C.monomial(tuple(e) + zl) for e in np.eye(A.nvars, dtype=int).tolist()] if A.nvars else []
    )
    emb_right = AlgebraMap.from_generator_images(
        B, C, [C.monomial(zr + tuple(e)) for e in np.eye(B.nvars, dtype=int).tolist()] if B.nvars else []
    )
    pair = np.zeros((A.dim, B.dim), dtype=np.int64)
    for i, ea in enumerate(A.basis):
        for j, eb in enumerate(B.basis):
            pair[i, j] = C.index[ea + eb]
    return TensorProduct(C, emb_left, emb_right, pair)


class AlgebraMap:
    """Linear map between local algebras as a (target.dim x source.dim)
    matrix over GF(p), with flags recording verified structure."""

    __slots__ = ("source", "target", "matrix", "is_algebra_map", "module_over")

    def __init__(self, source, target, matrix, is_algebra_map=False, module_over=None):
        self.source = source
        self.target = target
        m = np.asarray(matrix, dtype=np.int64) % target.p
        if m.shape != (target.dim, source.dim):
            raise ExactKernelError("matrix shape %r does not match map" % (m.shape,))
        self.matrix = m
        self.is_algebra_map = is_algebra_map
        # when set, this is the algebra map f: target -> source making self
        # a module map over the target: self(f(a) * b) = a * self(b)
        self.module_over = module_over

    @classmethod
    def identity(cls, A) -> "AlgebraMap":
        return cls(A, A, np.eye(A.dim, dtype=np.int64), is_algebra_map=True)

    @classmethod
    def from_generator_images(cls, A: BorelAlgebra, B, images) -> "AlgebraMap":
        """Extend generator images multiplicatively over the monomial basis.

        Checks the defining relations (each image to the q_i-th power is 0);
        a violated relation raises 'not an algebra map'.
        """
        images = [img if isinstance(img, El) else El(B, img) for img in images]
        if len(images) != A.nvars:
            raise ExactKernelError("need one generator image per variable")
        for img, q in zip(images, A.profile):
            if not (img ** q).is_zero():
                raise ExactKernelError(
                    "not an algebra map: generator image fails its defining relation"
                )
        cols = np.zeros((B.dim, A.dim), dtype=np.int64)
        memo: dict[tuple, El] = {}
        one = B.one()
        for idx, e in enumerate(A.basis):  # graded order: predecessors come first
            if sum(e) == 0:
                val = one
            else:
                i = next(k for k, a in enumerate(e) if a)
                prev = tuple(a - 1 if k == i else a for k, a in enumerate(e))
                val = memo[prev] * images[i]
            memo[e] = val
            cols[:, idx] = val.vec
        return cls(A, B, cols, is_algebra_map=True)

    def apply(self, el):
        vec = el.vec if isinstance(el, El) else np.asarray(el, dtype=np.int64)
        return El(self.target, (self.matrix @ vec) % self.target.p)

    def __call__(self, el):
        return self.apply(el)

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """self o other (apply other first)."""
        if other.target != self.source:
            raise ExactKernelError("maps do not compose")
        return AlgebraMap(
            other.source,
            self.target,
            (self.matrix @ other.matrix) % self.target.p,
            is_algebra_map=self.is_algebra_map and other.is_algebra_map,
        )

    def __add__(self, other):
        if other.source != self.source or other.target != self.target:
            raise ExactKernelError("map shapes differ")
        return AlgebraMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        if other.source != self.source or other.target != self.target:
            raise ExactKernelError("map shapes differ")
        return AlgebraMap(self.source, self.target, self.matrix - other.matrix)

    def scale(self, c: int) -> "AlgebraMap":
        return AlgebraMap(self.source, self.target, self.matrix * (c % self.target.p))

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraMap)
            and self.source == other.source
            and self.target == other.target
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    def as_fpmatrix(self) -> FpMatrix:
        return FpMatrix(self.matrix, self.target.p)

    def rank(self) -> int:
        return self.as_fpmatrix().rank()

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def check_unital(self) -> bool:
        return bool(np.array_equal((self.matrix @ self.source.one_vec()) % self.target.p,
                                   self.target.one_vec()))

    def check_multiplicative(self) -> bool:
        """Exhaustive multiplicativity test over basis pairs."""
        src, tgt = self.source, self.target
        if not self.check_unital():
            return False
        imgs = [self.apply(b) for b in src.basis_elements()]
        for i in range(src.dim):
            ei = np.eye(src.dim, dtype=np.int64)[i]
            for j in range(i, src.dim):
                ej = np.eye(src.dim, dtype=np.int64)[j]
                prod_src = src.mul_vec(ei, ej)
                lhs = self.apply(prod_src)
                rhs = imgs[i] * imgs[j]
                if lhs != rhs:
                    return False
        return True

    def check_module_map(self, f: "AlgebraMap") -> bool:
        """Is self: B -> A an A-module map along f: A -> B?  Exhaustive over
        basis pairs: self(f(a) b) = a self(b)."""
        A, B = self.target, self.source
        if f.source != A or f.target != B:
            raise ExactKernelError("module structure map has wrong endpoints")
        for a in A.basis_elements():
            fa = f.apply(a)
            for b in B.basis_elements():
                lhs = self.apply(El(B, B.mul_vec(fa.vec, b.vec)))
                rhs = a * self.apply(b)
                if lhs != rhs:
                    return False
        return True

    def __repr__(self):
        return "AlgebraMap(%r -> %r)" % (self.source, self.target)


def algebra_map(A: BorelAlgebra, B, generator_images) -> AlgebraMap:
    """Extend generator images to an algebra map (relations checked)."""
    return AlgebraMap.from_generator_images(A, B, generator_images)


class Subalgebra(_LocalAlgebraOps):
    """A unital, multiplicatively closed subspace of a Borel algebra, in its
    own coordinates; the RREF basis makes coordinates a plain column pick."""

    def __init__(self, ambient, basis_vecs):
        self.ambient = ambient
        self.p = ambient.p
        rows = row_space_basis(list(basis_vecs), ambient.dim, ambient.p)
        if not rows:
            raise ExactKernelError("empty subalgebra")
        B = FpMatrix(np.array(rows), ambient.p)
        R, pivots = B.rref()
        self.basis_matrix = R.a  # (dim x ambient.dim), RREF rows
        self.pivots = pivots
        self.dim = len(pivots)
        if not subspace_contains(self.basis_matrix, ambient.one_vec(), self.p):
            raise ExactKernelError("subalgebra must contain 1")
        for i in range(self.dim):
            for j in range(i, self.dim):
                prod = ambient.mul_vec(self.basis_matrix[i], self.basis_matrix[j])
                if not subspace_contains(self.basis_matrix, prod, self.p):
                    raise ExactKernelError("subspace is not closed under multiplication")

    def __eq__(self, other):
        return (
            isinstance(other, Subalgebra)
            and self.ambient == other.ambient
            and self.dim == other.dim
            and bool(np.array_equal(self.basis_matrix, other.basis_matrix))
        )

    def __hash__(self):
        return hash((self.ambient, self.dim, self.basis_matrix.tobytes()))

    def __repr__(self):
        return "Subalgebra(dim %d of %r)" % (self.dim, self.ambient)

    # coordinates: RREF rows have identity on pivot columns
    def to_sub(self, ambient_vec) -> np.ndarray:
        v = np.asarray(ambient_vec, dtype=np.int64) % self.p
        coords = v[self.pivots]
        if not np.array_equal((coords @ self.basis_matrix) % self.p, v):
            raise ExactKernelError("vector lies outside the subalgebra")
        return coords

    def from_sub(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64) % self.p
        return (c @ self.basis_matrix) % self.p

    def one_vec(self) -> np.ndarray:
        return self.to_sub(self.ambient.one_vec())

    def aug_vec(self, vec) -> int:
        return self.ambient.aug_vec(self.from_sub(vec))

    def mul_vec(self, u, v) -> np.ndarray:
        prod = self.ambient.mul_vec(self.from_sub(u), self.from_sub(v))
        return self.to_sub(prod)

    def radical_span_vecs(self) -> list[np.ndarray]:
        rows = []
        for i in range(self.dim):
            e = np.zeros(self.dim, dtype=np.int64)
            e[i] = 1
            if self.aug_vec(e):
                # subtract aug * 1 to land in the radical
                e = (e - self.aug_vec(e) * self.one_vec()) % self.p
            if e.any():
                rows.append(e)
        return row_space_basis(rows, self.dim, self.p)

    def include(self) -> AlgebraMap:
        """The inclusion into the ambient algebra, as an AlgebraMap."""
        return AlgebraMap(self, self.ambient, self.basis_matrix.T, is_algebra_map=True)

    def element_from_ambient(self, el: El) -> El:
        return El(self, self.to_sub(el.vec))

    def element_to_ambient(self, el: El) -> El:
        return El(self.ambient, self.from_sub(el.vec))


def subalgebra_close(A, vectors) -> Subalgebra:
    """Smallest unital subalgebra of A containing the given elements
    (span-grow under products to a fixed point)."""
    vecs = [v.vec if isinstance(v, El) else np.asarray(v, dtype=np.int64) for v in vectors]
    span = row_space_basis(vecs + [A.one_vec()], A.dim, A.p)
    while True:
        prods = list(span)
        for i in range(len(span)):
            for j in range(i, len(span)):
                prods.append(A.mul_vec(span[i], span[j]))
        new = row_space_basis(prods, A.dim, A.p)
        if len(new) == len(span):
            return Subalgebra(A, new)
        span = new


def socle_basis(A) -> list[El]:
    """Basis of soc A = annihilator of the maximal ideal."""
    return A.socle_basis()


def is_unit(A, u) -> bool:
    """Units of a local augmented algebra are the elements with nonzero
    augmentation."""
    el = u if isinstance(u, El) else El(A, u)
    return el.is_unit()
