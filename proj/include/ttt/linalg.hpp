#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace ttt {

using Complex = std::complex<double>;

/// Coefficients c_0..c_d of det(λI − A) = Σ c_j λ^j, so c_d = 1.
///
/// Upper-Hessenberg input (companion matrices included) is expanded directly
/// by Hyman's recurrence; anything else is reduced to Hessenberg form first.
std::vector<Complex> characteristic_polynomial(const Eigen::MatrixXcd& a);

/// Multiset distance between two equally sized point sets in the plane: the
/// maximum over points of the distance to the nearest point of the other set.
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

/// Elementary symmetric polynomials e_0..e_d of the given values (e_0 = 1).
std::vector<Complex> elementary_symmetric(std::span<const Complex> values);

}  // namespace ttt
