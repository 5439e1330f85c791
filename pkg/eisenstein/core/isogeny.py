"""
Odd-degree isogenies of Legendre curves E_lambda: y^2 = x(x - 1)(x - lambda) over F_{N^2}.

The l + 1 cyclic subgroups of order l of a supersingular E_lambda are all rational over F_{N^2} (the Frobenius acts as
a scalar) so their kernel polynomials are factors of degree (l - 1)/2 of the division polynomial. The image of a
2-torsion point (x0, 0) under the Velu isogeny with kernel polynomial D has x-coordinate

    X(x0) = l * x0 - 2 * s1 - 2 * f'(x0) * D'(x0) / D(x0)

where f = x(x - 1)(x - lambda) and s1 is the sum of the roots of D. The image curve is put back in Legendre form by
sending the images of (0, 0) and (1, 0) to (0, 0) and (1, 0).
"""

import logging
from typing import List

import eisenstein.core.errors as errors
from eisenstein.core.fields import FieldCtx, Fq2Elem, Scalar
from eisenstein.core.poly import Fq2Poly, fq2_factor_degree_le2


_module_logger = logging.getLogger(__name__)

SUPPORTED_DEGREES = (3, 5)


def _check_degree(ctx: FieldCtx, ell: int) -> None:
    if ell not in SUPPORTED_DEGREES:
        raise errors.UnsupportedDegree(f"isogenies of degree {ell} are not supported, use one of {SUPPORTED_DEGREES}")
    if ell == ctx.N:
        raise errors.UnsupportedDegree(f"isogeny degree should differ from the characteristic {ctx.N}")


def division_polynomial(ctx: FieldCtx, lam: Scalar, ell: int) -> Fq2Poly:
    """l-th division polynomial of E_lambda as a polynomial in x (l = 3, 5)"""
    _check_degree(ctx, ell)
    lam = ctx.coerce(lam)
    # y^2 = x^3 + a2 x^2 + a4 x, b-invariants of a curve with a1 = a3 = a6 = 0
    a2, a4 = -(lam + 1), lam
    b2, b4, b6, b8 = 4 * a2, 2 * a4, ctx.zero, -(a4 * a4)
    psi3 = Fq2Poly.from_elements(ctx, [b8, 3 * b6, 3 * b4, b2, 3])
    if ell == 3:
        return psi3
    # psi_5 = psi_4 psi_2^3 - psi_3^3 with psi_4 = psi_2 * F4 and psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    psi2_squared = Fq2Poly.from_elements(ctx, [b6, 2 * b4, b2, 4])
    f4 = Fq2Poly.from_elements(ctx, [b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2])
    return f4 * psi2_squared * psi2_squared - psi3 * psi3 * psi3


def _double_x(ctx: FieldCtx, lam: Fq2Elem, x: Fq2Elem) -> Fq2Elem:
    """x(2P) from x(P) on E_lambda"""
    a2, a4 = -(lam + 1), lam
    b2, b4, b8 = 4 * a2, 2 * a4, -(a4 * a4)
    numerator = x ** 4 - b4 * x * x - b8
    denominator = 4 * x ** 3 + b2 * x * x + 2 * b4 * x
    return numerator / denominator


def kernel_polynomials(ctx: FieldCtx, lam: Scalar, ell: int) -> List[Fq2Poly]:
    """Monic kernel polynomials (degree (l-1)/2) of the l + 1 cyclic subgroups of order l of E_lambda"""
    lam = ctx.coerce(lam)
    psi = division_polynomial(ctx, lam, ell)
    roots, quadratics = fq2_factor_degree_le2(psi)
    if ell == 3:
        if quadratics:
            raise errors.InternalInvariantViolation(f"3-torsion of E_{lam} is not rational over F_{ctx.N}^2")
        kernels = [Fq2Poly.x_minus(ctx, root) for root in roots]
    else:
        # an irreducible quadratic factor is the orbit {x(P), x(2P)} under Frobenius; rational roots pair up by doubling
        kernels = list(quadratics)
        remaining = set(roots)
        for root in roots:
            if root not in remaining:
                continue
            partner = _double_x(ctx, lam, root)
            if partner not in remaining or partner == root:
                raise errors.InternalInvariantViolation(f"5-torsion abscissas of E_{lam} do not pair up")
            remaining -= {root, partner}
            kernels.append(Fq2Poly.x_minus(ctx, root) * Fq2Poly.x_minus(ctx, partner))
    if len(kernels) != ell + 1:
        raise errors.InternalInvariantViolation(f"E_{lam} has {len(kernels)} cyclic subgroups of order {ell}, "
                                                f"expected {ell + 1}")
    return kernels


def image_lambda(ctx: FieldCtx, lam: Scalar, kernel: Fq2Poly) -> Fq2Elem:
    """Legendre parameter of the image of E_lambda by the isogeny with the given kernel polynomial"""
    lam = ctx.coerce(lam)
    ell = 2 * kernel.degree + 1
    d_prime = kernel.derivative()
    s1 = -kernel.coefficient(kernel.degree - 1)  # kernel is monic

    def image_x(x0: Fq2Elem, f_prime: Fq2Elem) -> Fq2Elem:
        return ell * x0 - 2 * s1 - 2 * f_prime * d_prime(x0) / kernel(x0)

    # f'(x) = 3x^2 - 2(1 + lambda) x + lambda at the 2-torsion abscissas 0, 1, lambda
    e0 = image_x(ctx.zero, lam)
    e1 = image_x(ctx.one, 1 - lam)
    e_lam = image_x(lam, lam * lam - lam)
    return (e_lam - e0) / (e1 - e0)


def legendre_isogenous(ctx: FieldCtx, lam: Scalar, ell: int) -> List[Fq2Elem]:
    """The l + 1 parameters lambda' with lambda ~_l lambda' (with multiplicity), sorted"""
    lam = ctx.coerce(lam)
    return sorted(image_lambda(ctx, lam, kernel) for kernel in kernel_polynomials(ctx, lam, ell))
