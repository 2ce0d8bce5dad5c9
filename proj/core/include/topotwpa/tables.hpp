#pragma once

#include <span>
#include <vector>

#include "topotwpa/dataset.hpp"
#include "topotwpa/lattice.hpp"
#include "topotwpa/response.hpp"

namespace topotwpa {

/// Forward gain, reverse gain, added noise and noise asymmetry at the last
/// site for each omega / J in `omega_over_J`.
Dataset response_table(const NambuMatrix& h, double J, std::span<const double> omega_over_J,
                       int input_site = 0);

/// Six smallest singular values (units of J) per frequency.
Dataset spectrum_table(const NambuMatrix& h, double J, std::span<const double> omega_over_J);

/// One row per site, 1-based.
Dataset occupation_table(const std::vector<Occupation>& profile);

/// Every entry of H_nh (units of J), row-major, 0-based indices.
Dataset matrix_table(const NambuMatrix& h, double J);

}  // namespace topotwpa
