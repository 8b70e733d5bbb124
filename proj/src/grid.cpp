#include "modica/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "modica/report.hpp"

namespace modica {

namespace {

Grid make_grid(Topology topo, std::vector<int> npts, std::vector<double> length,
               std::vector<double> origin);

void check_axes(const std::vector<int>& npts, const std::vector<double>& length) {
  if (npts.empty() || npts.size() > 3) throw std::invalid_argument("grid dimension must be 1-3");
  if (length.size() != npts.size())
    throw std::invalid_argument("grid extents must match the dimension");
  for (size_t a = 0; a < npts.size(); ++a) {
    if (npts[a] < 8) throw std::invalid_argument("grids need at least 8 nodes per axis");
    if (!(length[a] > 0.0)) throw std::invalid_argument("grid extents must be positive");
  }
}

}  // namespace

Grid Grid::periodic(std::vector<int> npts, std::vector<double> length, std::vector<double> origin) {
  check_axes(npts, length);
  Grid g;
  g.topology_ = Topology::periodic;
  g.dim_ = static_cast<int>(npts.size());
  g.size_ = 1;
  for (int a = 0; a < g.dim_; ++a) {
    g.n_[a] = npts[a];
    g.length_[a] = length[a];
    g.origin_[a] = a < static_cast<int>(origin.size()) ? origin[a] : 0.0;
    g.h_[a] = length[a] / npts[a];
    g.size_ *= npts[a];
  }
  return g;
}

Grid Grid::clamped(std::vector<int> npts, std::vector<double> length, std::vector<double> origin) {
  check_axes(npts, length);
  Grid g;
  g.topology_ = Topology::clamped;
  g.dim_ = static_cast<int>(npts.size());
  g.size_ = 1;
  for (int a = 0; a < g.dim_; ++a) {
    g.n_[a] = npts[a];
    g.length_[a] = length[a];
    g.origin_[a] = a < static_cast<int>(origin.size()) ? origin[a] : 0.0;
    g.h_[a] = length[a] / (npts[a] - 1);  // both endpoints are nodes
    g.size_ *= npts[a];
  }
  return g;
}

double Grid::max_spacing() const {
  double h = 0.0;
  for (int a = 0; a < dim_; ++a) h = std::max(h, h_[a]);
  return h;
}

bool Grid::on_boundary(const std::array<int, 3>& idx) const {
  if (topology_ == Topology::periodic) return false;
  for (int a = 0; a < dim_; ++a)
    if (idx[a] == 0 || idx[a] == n_[a] - 1) return true;
  return false;
}

bool Grid::interior(const std::array<int, 3>& idx, int margin) const {
  if (topology_ == Topology::periodic) return true;
  for (int a = 0; a < dim_; ++a)
    if (idx[a] < margin || idx[a] > n_[a] - 1 - margin) return false;
  return true;
}

bool Grid::same_layout(const Grid& other) const {
  if (dim_ != other.dim_ || topology_ != other.topology_) return false;
  for (int a = 0; a < dim_; ++a)
    if (n_[a] != other.n_[a] || length_[a] != other.length_[a] || origin_[a] != other.origin_[a])
      return false;
  return true;
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
  if (static_cast<int64_t>(v_.size()) != grid_.size())
    throw std::invalid_argument("field length does not match the grid");
  for (int64_t i = 0; i < grid_.size(); ++i)
    if (!std::isfinite(v_[i]))
      throw std::invalid_argument("field carries a non-finite value at node " + std::to_string(i));
}

ScalarField::ScalarField(Grid grid, double fill)
    : grid_(std::move(grid)), v_(static_cast<size_t>(grid_.size()), fill) {}

VectorField::VectorField(Grid grid, int ncomp)
    : grid_(std::move(grid)), ncomp_(ncomp), v_(static_cast<size_t>(grid_.size()) * ncomp, 0.0) {}

MatrixField::MatrixField(Grid grid, int n)
    : grid_(std::move(grid)), n_(n), v_(static_cast<size_t>(grid_.size()) * n * n, 0.0) {}

ScalarField sample_field(const std::function<double(const SmallVec&)>& expr, const Grid& grid) {
  std::vector<double> v(static_cast<size_t>(grid.size()));
  for (int64_t i = 0; i < grid.size(); ++i) {
    double val = expr(grid.node_coords(grid.unpack(i)));
    if (!std::isfinite(val))
      throw std::runtime_error("sampled expression is not finite at node " + std::to_string(i));
    v[i] = val;
  }
  return ScalarField(grid, std::move(v));
}

namespace {

void put_u64(std::ofstream& out, uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::ofstream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }

uint64_t get_u64(std::ifstream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
double get_f64(std::ifstream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  const Grid& g = field.grid();
  put_u64(out, static_cast<uint64_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) put_u64(out, static_cast<uint64_t>(g.npts(a)));
  for (int a = 0; a < g.dim(); ++a) put_f64(out, g.length(a));
  for (int a = 0; a < g.dim(); ++a) put_f64(out, g.origin(a));
  put_u64(out, g.is_periodic() ? 0 : 1);
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.size()) * 8);
  if (!out) throw std::runtime_error("write failed: " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  int dim = static_cast<int>(get_u64(in));
  if (dim < 1 || dim > 3) throw std::runtime_error("bad field header in " + path);
  std::vector<int> n(dim);
  std::vector<double> L(dim), origin(dim);
  for (int a = 0; a < dim; ++a) n[a] = static_cast<int>(get_u64(in));
  for (int a = 0; a < dim; ++a) L[a] = get_f64(in);
  for (int a = 0; a < dim; ++a) origin[a] = get_f64(in);
  uint64_t topo = get_u64(in);
  Grid g = topo == 0 ? Grid::periodic(n, L, origin) : Grid::clamped(n, L, origin);
  std::vector<double> v(static_cast<size_t>(g.size()));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(g.size()) * 8);
  if (!in) throw std::runtime_error("truncated field file: " + path);
  return ScalarField(g, std::move(v));
}

void write_field_csv(const std::string& path, const ScalarField& field) {
  const Grid& g = field.grid();
  std::vector<std::string> header{"node"};
  const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < g.dim(); ++a) header.emplace_back(names[a]);
  header.emplace_back("value");
  CsvTable csv(std::move(header));
  for (int64_t i = 0; i < g.size(); ++i) {
    auto idx = g.unpack(i);
    std::vector<std::string> row{std::to_string(i)};
    for (int a = 0; a < g.dim(); ++a) row.push_back(format_g17(g.coord(a, idx[a])));
    row.push_back(format_g17(field[i]));
    csv.add_row(std::move(row));
  }
  csv.write(path);
}

}  // namespace modica
