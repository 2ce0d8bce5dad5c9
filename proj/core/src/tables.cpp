#include "topotwpa/tables.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "topotwpa/topology.hpp"
#include "topotwpa/units.hpp"

namespace topotwpa {

Dataset response_table(const NambuMatrix& h, double J, std::span<const double> omega_over_J,
                       int input_site) {
  Dataset d{SchemaKind::response, {}};
  const int last = h.n_sites() - 1;
  for (double x : omega_over_J) {
    const double w = x * J;
    const auto g = gains(h, w, input_site, last);
    const auto n = noise(h, w, last, input_site);
    d.rows.push_back({x, to_db(g.forward), to_db(g.reverse), n.added,
                      to_db(noise_asymmetry(h, w))});
  }
  return d;
}

Dataset spectrum_table(const NambuMatrix& h, double J, std::span<const double> omega_over_J) {
  Dataset d{SchemaKind::spectrum, {}};
  const auto kept = static_cast<Eigen::Index>(schema(SchemaKind::spectrum).columns.size() - 1);
  for (double x : omega_over_J) {
    const Eigen::VectorXd s = singular_values(h, x * J) / J;
    Row row{x};
    for (Eigen::Index i = 0; i < kept; ++i) {
      row.emplace_back(i < s.size() ? s(i) : std::numeric_limits<double>::quiet_NaN());
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

Dataset occupation_table(const std::vector<Occupation>& profile) {
  Dataset d{SchemaKind::occupation, {}};
  for (const Occupation& o : profile) {
    d.rows.push_back({static_cast<std::int64_t>(o.site + 1), o.total, o.coherent, o.noise});
  }
  return d;
}

Dataset matrix_table(const NambuMatrix& h, double J) {
  Dataset d{SchemaKind::matrix, {}};
  const Eigen::MatrixXcd& m = h.entries();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      d.rows.push_back({static_cast<std::int64_t>(r), static_cast<std::int64_t>(c),
                        m(r, c).real() / J, m(r, c).imag() / J});
    }
  }
  return d;
}

}  // namespace topotwpa
