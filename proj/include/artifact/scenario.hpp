#pragma once

#include "artifact/fragmetric.hpp"

#include <map>
#include <string>
#include <vector>

namespace artifact {

/// One report line: "QUERY | RESULT | WITNESS | STATUS".
struct ReportLine {
  std::string query, result, witness;
  enum class Status { Pass, Fail, Info } status = Status::Info;
  std::vector<FootprintPiece> footprint;  ///< of the metric witness, if any
  std::string str() const;
};

/// Curve system, families, moves and queries read from a scenario file.
///
///   param eps = 1/8
///   curve L: (-1,0) (1,0)
///   surgery L2 = L # S1 at (-5/8,0) area=d column=0
///   suspension L' L length=4eps
///   uturn S2
///   move W: L -> S1 L S1 shadow=1/64
///   family F: S1 S2 S3 S4
///   probe N
///   monotone A_L=1/2
///   query d_k L' L k=0 expect=[4eps,4eps]
struct Scenario {
  MoveSystem sys;
  std::map<std::string, Q> params;
  std::vector<std::string> queries;
  SearchBudget budget;

  static Scenario parse(const std::string& text);
  /// Value syntax: rational, "inf" (nullopt), or [coef][*]param[^2].
  std::optional<Q> value(const std::string& token) const;
  ReportLine run(const std::string& query) const;
  std::vector<ReportLine> run_all() const;
};

/// The four-strand torus configuration: L (y = 0), S1..S4 at x = -1/2 -+ eps,
/// 1/2 -+ eps, N at y = -2 eps, L' = (((L # S1) # S2) # S3) # S4 with handles
/// of area delta grouped in two columns, L'' = L # S1, the suspension
/// L' -> L of length 4 eps and the family F = {S1, S2, S3, S4}.
/// Throws unless 0 < delta < eps^2 / 2 and eps < 1/4.
Scenario torus_example(const Q& eps, const Q& delta);

/// The drawn path of L' (used to cross-check the surgery composite).
TorusCurve drawn_l_prime(const Q& eps, const Q& delta);

struct Check {
  std::string name, expected, got;
  bool pass = false;
};
/// Every stated number of the four-strand example, recomputed.
std::vector<Check> repro_lemma(const Q& eps, const Q& delta);

}  // namespace artifact
