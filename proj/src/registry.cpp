#include "modica/registry.hpp"

#include <cmath>
#include <stdexcept>

namespace modica {

namespace {

void need_params(const std::string& who, const std::vector<double>& p, size_t count) {
  if (p.size() < count)
    throw std::invalid_argument(who + " needs " + std::to_string(count) + " parameter(s)");
}

SourceModel::ScalarFn scalar_by_name(const std::string& name, bool derivative) {
  if (name == "id") return derivative ? SourceModel::ScalarFn([](double) { return 1.0; })
                                      : SourceModel::ScalarFn([](double u) { return u; });
  if (name == "exp") return [](double u) { return std::exp(u); };
  throw std::invalid_argument("unknown scalar function: " + name + " (expected id or exp)");
}

}  // namespace

SourceModel make_source(const std::string& f_name, const std::vector<double>& f_params,
                        const std::string& g_name, const std::vector<double>& g_params,
                        int n, int eta_dim, std::optional<double> beta_override) {
  SourceModel::ScalarFn f, fp, f0;
  if (f_name == "allen_cahn") {
    f = [](double u) { return u * u * u - u; };
    fp = [](double u) { return 3.0 * u * u - 1.0; };
    f0 = [](double u) { return 0.25 * u * u * u * u - 0.5 * u * u; };
  } else if (f_name == "linear") {
    need_params("f = linear", f_params, 1);
    double lam = f_params[0];
    f = [lam](double u) { return lam * u; };
    fp = [lam](double) { return lam; };
    f0 = [lam](double u) { return 0.5 * lam * u * u; };
  } else if (f_name == "zero") {
    f = [](double) { return 0.0; };
    fp = [](double) { return 0.0; };
    f0 = [](double) { return 0.0; };
  } else {
    throw std::invalid_argument("unknown f: " + f_name);
  }

  SourceModel::GFn g;
  std::optional<double> beta;
  if (g_name == "zero") {
    g = [eta_dim](const SmallVec& zeta, const SmallVec&) {
      GEval e;
      e.g_zeta = SmallVec(zeta.n);
      e.g_eta = SmallVec(eta_dim);
      return e;
    };
  } else if (g_name == "power_drift") {
    need_params("g = power_drift", g_params, 1);
    double b = g_params[0];
    beta = b;
    g = [b](const SmallVec& zeta, const SmallVec& eta) {
      GEval e;
      double z = norm(zeta);
      double h = std::exp(eta[0]);
      e.g = std::pow(z, b) * h;
      e.g_zeta = SmallVec(zeta.n);
      if (z > 0.0) {
        double w = b * std::pow(z, b - 2.0) * h;
        for (int j = 0; j < zeta.n; ++j) e.g_zeta[j] = w * zeta[j];
      }
      e.g_eta = SmallVec(1);
      e.g_eta[0] = e.g;
      return e;
    };
  } else if (g_name == "bilinear_drift") {
    g = [](const SmallVec& zeta, const SmallVec& eta) {
      GEval e;
      int n = zeta.n;
      e.g = eta[n];
      for (int j = 0; j < n; ++j) e.g += zeta[j] * eta[j];
      e.g_zeta = SmallVec(n);
      for (int j = 0; j < n; ++j) e.g_zeta[j] = eta[j];
      e.g_eta = SmallVec(n + 1);
      for (int j = 0; j < n; ++j) e.g_eta[j] = zeta[j];
      e.g_eta[n] = 1.0;
      return e;
    };
  } else if (g_name == "constant_drift") {
    beta = 1.0;
    g = [](const SmallVec& zeta, const SmallVec& eta) {
      GEval e;
      int n = zeta.n;
      double czeta = 0.0;
      for (int j = 0; j < n; ++j) czeta += zeta[j] * eta[j];
      e.g = czeta * eta[n];
      e.g_zeta = SmallVec(n);
      for (int j = 0; j < n; ++j) e.g_zeta[j] = eta[j] * eta[n];
      e.g_eta = SmallVec(n + 1);
      for (int j = 0; j < n; ++j) e.g_eta[j] = zeta[j] * eta[n];
      e.g_eta[n] = czeta;
      return e;
    };
  } else {
    throw std::invalid_argument("unknown g: " + g_name);
  }

  if (beta_override) beta = beta_override;
  return SourceModel(std::move(f), std::move(fp), std::move(g), eta_dim, beta, std::move(f0));
}

SOperator make_s_operator(const std::string& name, const std::vector<double>& params,
                          const std::vector<std::string>& string_params, int n) {
  if (name == "identity") return SOperator::identity();
  if (name == "power_u") {
    need_params("s = power_u", params, 1);
    return SOperator::power_u(params[0]);
  }
  std::string h_name = string_params.empty() ? "id" : string_params[0];
  auto h = scalar_by_name(h_name, false);
  auto hp = scalar_by_name(h_name, true);
  if (name == "constant_drift") {
    need_params("s = constant_drift", params, static_cast<size_t>(n));
    SmallVec c(n);
    for (int j = 0; j < n; ++j) c[j] = params[j];
    return SOperator::constant_drift(c, std::move(h), std::move(hp));
  }
  if (name == "linear_drift") {
    need_params("s = linear_drift", params, static_cast<size_t>(n));
    SmallVec a(n);
    for (int j = 0; j < n; ++j) a[j] = params[j];
    auto c = [a](const SmallVec& x) {
      SmallVec v(x.n);
      for (int j = 0; j < x.n; ++j) v[j] = a.v[j] * x[j];
      return v;
    };
    auto dc = [a](const SmallVec& x) {
      SmallMat m(x.n, x.n);
      for (int j = 0; j < x.n; ++j) m.at(j, j) = a.v[j];
      return m;
    };
    return SOperator::drift_field(std::move(c), std::move(dc), std::move(h), std::move(hp));
  }
  throw std::invalid_argument("unknown s operator: " + name);
}

std::function<double(const SmallVec&)> make_initial(const std::string& name,
                                                    const std::vector<double>& params) {
  if (name == "constant") {
    need_params("initial = constant", params, 1);
    double a = params[0];
    return [a](const SmallVec&) { return a; };
  }
  if (name == "cos_x") {
    need_params("initial = cos_x", params, 2);
    double amp = params[0], k = params[1];
    return [amp, k](const SmallVec& x) { return amp * std::cos(k * x[0]); };
  }
  if (name == "cos_xy") {
    need_params("initial = cos_xy", params, 3);
    double amp = params[0], kx = params[1], ky = params[2];
    return [amp, kx, ky](const SmallVec& x) {
      return amp * std::cos(kx * x[0]) * (x.n > 1 ? std::cos(ky * x[1]) : 1.0);
    };
  }
  throw std::invalid_argument("unknown initial condition: " + name);
}

}  // namespace modica
