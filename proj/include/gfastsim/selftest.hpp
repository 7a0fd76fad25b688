#pragma once
// Closed-form oracle suites exercised by the CLI `selftest` verb: symmetric
// 2- and 3-user channels with known ZF/MMSE/AZF/GDFE/precoder answers, the
// THP round trip, and randomized bound-ordering properties. Each suite
// prints one PASS/FAIL line and returns its verdict.

#include <iosfwd>

namespace gfastsim::selftest {

bool box_a_suite(std::ostream& out);          // ZF/MMSE/SWP/MFB closed forms
bool box_d_suite(std::ostream& out);          // AZF closed form and ZF gap
bool thp_roundtrip_suite(std::ostream& out);  // noiseless end-to-end identity
bool box_c_suite(std::ostream& out);          // linear precoder gains and SNR
bool bound_ordering_suite(std::ostream& out); // SNR orderings and ZF bracket

// Runs every suite; true only if all pass.
bool run_all(std::ostream& out);

}  // namespace gfastsim::selftest
