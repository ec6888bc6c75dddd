#pragma once

#include <json.hpp>

#include "hyperarr/arrangement.hpp"
#include "hyperarr/freeness.hpp"
#include "hyperarr/g31.hpp"
#include "hyperarr/lattice.hpp"
#include "hyperarr/sweep.hpp"

// JSON views of library results. Key order and array order are canonical, so
// equal results serialize to equal bytes.
namespace hyperarr::report {

nlohmann::json poly(const Poly& p);
nlohmann::json arrangement(const Arrangement& a);
// Flats as sorted atom arrays grouped by rank, with mu in the same order.
nlohmann::json lattice(const Lattice& l);
nlohmann::json class_result(const ClassResult& r);
// Counts only, or counts plus survivors and fingerprint classes.
nlohmann::json sweep(const SweepReport& r, bool detailed = false);
nlohmann::json partition(const g31::Partition& p);
nlohmann::json trichotomy(const g31::TrichotomyReport& t);

}  // namespace hyperarr::report
