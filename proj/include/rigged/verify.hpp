#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rigged/domain.hpp"

namespace rigged {

struct VerifyCheck {
  std::string name;
  double measured = 0.0;  // NaN when the check itself threw
  double tolerance = 0.0;
  bool pass = false;
};

/// Tolerance overrides by class. Unset classes keep each check's default:
///   match  matching, wronskian, smatrix, green symmetry/jump
///   quad   parseval, tk, normalization, resolvent identity
///   root   bound-state root residuals
struct VerifyOptions {
  std::optional<double> tol_match;
  std::optional<double> tol_quad;
  std::optional<double> tol_root;
  double k_max = 120.0;  // energy grid for the parseval suite
  int nodes = 2048;
};

/// matching, wronskian, green, normalization, parseval, tk, smatrix, membership.
const std::vector<std::string>& verify_suites();

/// Runs one suite or "all" (in the order above). Throws ValidationError on an
/// unknown suite name. Output is deterministic for a given spec and options.
std::vector<VerifyCheck> run_verify(const PotentialSpec& spec, const std::string& suite,
                                    const VerifyOptions& opts = {});

/// [{"name","measured","tolerance","pass"}]; NaN measurements become null.
std::string verify_json(const std::vector<VerifyCheck>& checks, int indent = 2);

}  // namespace rigged
