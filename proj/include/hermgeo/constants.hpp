#pragma once

#include <numbers>

// Convention catalog. Every quantity below is defined relative to this fixed
// convention set; no factor or sign is duplicated elsewhere in the library.
//
//   metric/curvature
//     R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y] Z
//     R_{ijkl} = g(R(e_i,e_j) e_l, e_k)   (round sphere: R_{ijij} > 0)
//     Ric_ij = g^{kl} R_{ikjl},  S = g^{ij} Ric_ij
//     Weyl via W = R - P (*) g, P = (Ric - S g / (2m-2))/(m-2),
//     (*) the Kulkarni-Nomizu product; W == 0 for conformally flat metrics.
//   forms
//     omega(X,Y) = g(JX,Y); flat standard J gives omega = sum dx^{2a-1} ^ dx^{2a}
//     (d alpha)_{i0..ip} = alternating sum of coordinate derivatives
//     2-form inner product <a,b> = 1/2 a_{ij} b^{ij}
//     Weyl on 2-forms: (W a)_{ij} = 1/2 W_{ijkl} a^{kl}
//     codifferential: (delta b)_j = -g^{ik} nabla_i b_{kj}, delta a = -g^{ij} nabla_i a_j
//     J on 1-forms: (J a)(X) = -a(JX)
//   torsion
//     g(nabla^c_X Y, Z) = g(nabla_X Y, Z) - 1/2 domega(JX, Y, Z)
//     tau(X,Y,Z) = g(T^c(X,Y), Z);  |T^c|^2 = |tau|^2 = tau_{ijk} tau^{ijk}
//     eta = (1,0) trace of T^c over a unitary frame (a complex 1-form)
//     theta = J delta omega;  in these conventions theta = +1 * (eta + conj eta)
//     |eta|^2 = |eta + conj eta|^2_g (real-form norm)

namespace hermgeo::constants {

inline constexpr double pi = std::numbers::pi;

/// Coefficient of the torsion-norm growth law: integral |T^c|^2 = torsion_norm_coeff * v2 * deg(f)
/// on a twistor torus over E x T^4.
inline constexpr double torsion_norm_coeff = 32.0 * pi;

/// Scalar-curvature coefficient (2n-2)/(2n-1) appearing in the Gauduchon
/// identity and the G-curvature, with 2n the real dimension.
inline constexpr double gauduchon_scalar_coeff(int real_dim) {
    return double(real_dim - 2) / double(real_dim - 1);
}

/// C^1 control constant: |nabla J| <= c1_bound_factor * |T^c|.
inline constexpr double c1_bound_factor = 3.0;

/// theta = lie_form_trace_factor * (eta^{(1,0)} + conjugate), calibrated on the
/// conformal-Kahler family where both sides are in closed form. The value -2
/// found in parts of the literature belongs to a different sign convention set;
/// its residual is reported alongside for reference.
inline constexpr double lie_form_trace_factor = 1.0;
inline constexpr double lie_form_trace_factor_alt = -2.0;

}  // namespace hermgeo::constants
