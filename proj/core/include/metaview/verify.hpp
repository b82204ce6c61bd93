#ifndef METAVIEW_VERIFY_HPP_
#define METAVIEW_VERIFY_HPP_

#include <string>
#include <vector>

namespace metaview {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the formula-level property suites at desk scale: spectral closed
/// form vs truncated series, exact small-graph spectra, finite-difference
/// gradient checks over every differentiable operation, permutation
/// invariance of the encoder, simplex properties of the attention and heads,
/// Xavier moments, episode disjointness and training determinism.
/// `quick` shrinks the sample counts for a fast smoke pass.
std::vector<VerifyResult> run_verify_suites(bool quick, std::uint64_t seed = 0);

bool all_passed(const std::vector<VerifyResult>& results);

} // namespace metaview

#endif // METAVIEW_VERIFY_HPP_
