#ifndef MODICA_REGISTRY_HPP
#define MODICA_REGISTRY_HPP

#include <functional>
#include <string>
#include <vector>

#include "modica/grid.hpp"
#include "modica/sources.hpp"

namespace modica {

/// Named nonlinearities selectable from config files.
///   f: "allen_cahn" (u^3 - u), "linear" [lambda], "zero"
///   g: "zero", "power_drift" [beta] (|zeta|^beta e^eta), "bilinear_drift"
///      (sum zeta_j eta_j + eta_{n+1}), "constant_drift"
///      ((zeta . eta_{1..n}) eta_{n+1})
///   s: "identity", "power_u" [q], "constant_drift" [c_1..c_n, h] with h in
///      {id, exp}, "linear_drift" [a_1..a_n, h] (c_j(x) = a_j x_j)
///   initial: "constant" [a], "cos_x" [amp, k], "cos_xy" [amp, kx, ky]
SourceModel make_source(const std::string& f_name, const std::vector<double>& f_params,
                        const std::string& g_name, const std::vector<double>& g_params,
                        int n, int eta_dim,
                        std::optional<double> beta_override = std::nullopt);

SOperator make_s_operator(const std::string& name, const std::vector<double>& params,
                          const std::vector<std::string>& string_params, int n);

std::function<double(const SmallVec&)> make_initial(const std::string& name,
                                                    const std::vector<double>& params);

}  // namespace modica

#endif
