"""Vanishing-cycle basis matrices: intersection form, Dehn twists,
monodromy, Seifert form and the variation operator.

Classes in H1 of the fiber are integer coordinate vectors in the V basis.
Relative classes are stored as pairing vectors p with p[j] = K . V_j.
"""

import warnings
from dataclasses import dataclass

from . import intmat as im

POSITIVE_PAIRS = {("+", "0"), ("0", "-"), ("+", "-")}


class SingularPairing(ArithmeticError):
    pass


class DegenerateDelta(UserWarning):
    pass


@dataclass
class VCBasis:
    order: list
    types: list

    @property
    def mu(self):
        return len(self.order)


def vc_basis(ag):
    return VCBasis(list(ag.order), ag.types())


def intersection_matrix(ag):
    """S[a][b] = V_a . V_b from the AGamma edges and vertex types."""
    n = ag.mu
    S = im.zeros(n)
    for a, b in ag.edges:
        ta, tb = ag.type_of(a), ag.type_of(b)
        if (ta, tb) in POSITIVE_PAIRS:
            S[a][b], S[b][a] = 1, -1
        elif (tb, ta) in POSITIVE_PAIRS:
            S[a][b], S[b][a] = -1, 1
    return S


def dehn_twist_matrix(S, i):
    """T_i x = x - (x^T S e_i) e_i, with i a 0-based basis index."""
    n = len(S)
    T = im.identity(n)
    for j in range(n):
        T[i][j] -= S[j][i]
    return T


def monodromy_matrix(S):
    """Ordered product T_1 T_2 ... T_mu."""
    H = im.identity(len(S))
    for i in range(len(S)):
        H = im.matmul(H, dehn_twist_matrix(S, i))
    return H


def seifert_matrix(S):
    n = len(S)
    L = im.zeros(n)
    for i in range(n):
        L[i][i] = -1
        for j in range(i):
            L[i][j] = -S[i][j]
    return L


def pairing_matrix(S):
    """P[i][j] = K_i . V_j for an adapted family; equals -L."""
    return im.neg(seifert_matrix(S))


def _check_unimodular(P):
    if im.is_lower_triangular(P) and all(abs(P[i][i]) == 1 for i in range(len(P))):
        return
    d = im.det(P)
    if abs(d) != 1:
        raise SingularPairing("pairing matrix has determinant %d" % d)


def variation_apply(P, p):
    """Var of the relative class with pairing vector p, in V coordinates.

    K-coordinates k solve k^T P = p^T, and Var(K_i) = -V_i.
    """
    _check_unimodular(P)
    if im.is_lower_triangular(P):
        # P^T k = p with P^T upper triangular: back substitution
        k = im.solve_upper_unitriangular(im.transpose(P), p)
    else:
        k = im.matvec(im.int_inverse(im.transpose(P)), p)
    return [-x for x in k]


def variation_inverse(P, a):
    """Pairing vector of the relative class whose variation is a."""
    _check_unimodular(P)
    k = [-x for x in a]
    return im.matvec(im.transpose(P), k)


def monodromy_from_variation(S, P):
    """H' = I - (P^T)^-1 S^T."""
    _check_unimodular(P)
    return im.sub(im.identity(len(S)), im.matmul(im.int_inverse(im.transpose(P)), im.transpose(S)))


def monodromy_from_seifert(L):
    """(L^T)^-1 L."""
    return im.matmul(im.int_inverse(im.transpose(L)), L)


@dataclass
class MatrixBundle:
    S: list
    L: list
    H: list
    P: list

    @property
    def mu(self):
        return len(self.S)

    def to_json(self):
        return {"mu": self.mu, "S": self.S, "L": self.L, "H": self.H, "P": self.P,
                "trace_H": im.trace(self.H), "det_L": im.det(self.L),
                "charpoly_H": [str(c) for c in im.charpoly(self.H)]}


def build_bundle(ag):
    S = intersection_matrix(ag)
    return bundle_from_S(S)


def bundle_from_S(S):
    L = seifert_matrix(S)
    return MatrixBundle(S, L, monodromy_matrix(S), im.neg(L))


def _diff(A, B):
    return [(i, j, A[i][j], B[i][j]) for i in range(len(A)) for j in range(len(A))
            if A[i][j] != B[i][j]]


def identity_checks(bundle, lefschetz=True):
    """Run the matrix identities; returns a list of (name, ok, detail)."""
    S, L, H, P = bundle.S, bundle.L, bundle.H, bundle.P
    n = len(S)
    out = []
    bad = [(i, j) for i in range(n) for j in range(n) if S[i][j] != -S[j][i]]
    out.append(("S antisymmetric", not bad, {"violations": bad[:10]}))
    lt = im.is_lower_triangular(L) and all(L[i][i] == -1 for i in range(n))
    out.append(("L lower triangular, diagonal -1", lt, {}))
    d = _diff(S, im.sub(im.transpose(L), L))
    out.append(("S = L^T - L", not d, {"differences": d[:10]}))
    dl = im.det(L)
    out.append(("det L = (-1)^mu", dl == (-1) ** n, {"det_L": dl}))
    d = _diff(P, im.neg(L))
    out.append(("P = -L", not d, {"differences": d[:10]}))
    try:
        H_dehn = monodromy_matrix(S)
        H_seif = monodromy_from_seifert(L)
        H_var = monodromy_from_variation(S, P)
        d1, d2 = _diff(H_dehn, H_seif), _diff(H_dehn, H_var)
        d3 = _diff(H, H_dehn)
        ok = not d1 and not d2 and not d3
        out.append(("triple agreement H", ok, {
            "dehn_vs_seifert": d1[:10], "dehn_vs_variation": d2[:10], "stored_vs_dehn": d3[:10]}))
    except (SingularPairing, ZeroDivisionError, ValueError) as exc:
        out.append(("triple agreement H", False, {"error": str(exc)}))
    if lefschetz and n > 1:
        tr = im.trace(H)
        out.append(("trace H = 1", tr == 1, {"trace": tr}))
    return out


def seifert_separating_value(delta, nu):
    """Sum over i<j of -nu_ij (delta_i - delta_j)^2, plus the bound verdict.

    Returns a dict with keys value, bound_holds, a1_exception, warning.
    """
    r = len(delta)
    if r < 2:
        raise ValueError("need at least two branches")
    if len(set(delta)) == 1:
        warnings.warn("all delta entries equal: the class is null-homologous", DegenerateDelta)
        return {"value": 0, "bound_holds": None, "a1_exception": False, "warning": "DegenerateDelta"}
    val = 0
    for i in range(r):
        for j in range(i + 1, r):
            val -= nu[i][j] * (delta[i] - delta[j]) ** 2
    return {"value": val, "bound_holds": val <= -2, "a1_exception": val == -1, "warning": None}
