#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace branchwalk {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    std::string fixture_dir;
    int threads = 2;
    std::ostream* progress = nullptr;  // per-criterion pass/fail lines
};

// Runs the full acceptance suite. Every threshold is pinned in code.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

bool all_passed(const std::vector<CriterionResult>& results);

namespace oracle {

// Independent evaluation of the nested time integral over the neutral-vertex
// prefix lengths a_1 <= ... <= a_k:
//   Q_0 = 1,  Q_j(x) = integral of Q_{j-1} from a_j to max(x, a_j),
// computed by nested adaptive Gauss-Kronrod quadrature rather than the exact
// piecewise-polynomial recursion.
double nested_integral(const std::vector<double>& prefixes, double t, double tol = 1e-12);

// Adaptive G7/K15 quadrature.
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace oracle

}  // namespace branchwalk
