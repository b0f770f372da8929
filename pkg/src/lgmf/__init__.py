"""Exact computations with matrix factorizations of affine Landau-Ginzburg
models R = Q[x_1..x_n]/I with potential W."""

__version__ = "0.1.0"

from .expr import (DEGREVLEX, LEX, MonomialOrder, PolyRing, Polynomial, elimination,
                   evaluate, parse_poly, partial_derivative, render)
from .ideal import (BudgetExhausted, GroebnerBasis, Ideal, groebner, ideal_dimension,
                    ideal_quotient, module_membership, normal_form, radical_membership)
from .localize import (FiberAt, PrimeIdeal, RationalPoint, RingLevel, fiber_cohomology,
                       h0_class, in_support, is_nullhomotopic, parse_point, parse_prime,
                       trim_at_point)
from .matrix import Matrix
from .mfcore import (LGModel, MatrixFactorization, MFComplex, MFMorphism, compose, cone,
                     direct_sum, dual, half_tensor, identity, koszul, make_morphism,
                     mf_new, mf_with_support_zero_potential, scale, sheaf_hom, shift,
                     tensor, tensor_morphism, tensor_power, totalize, unit_object,
                     zero_morphism, zero_object)
from .modelfile import load_model
from .singloc import (build_nonvanishing_mf, critical_point_check, in_singloc,
                      jacobian_numbers, realize_support, sample_singloc, witness_decomposition)
from .tensorgeom import (check_support_containment, check_support_data_axioms,
                         generator_probe, nilpotence_search, sample_submodule_expression)
