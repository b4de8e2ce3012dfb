#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cryptolens/ingest.h"

namespace cryptolens {

// Named nodes below the site's argument list or body block. Declarations
// without a body count as 0.
std::size_t count_d(const InvocationSite& site);

// tanh(log10 d), with d = 0 mapped to -1. Throws std::invalid_argument for d < 0.
double score(long long d);

// Fixed six-decimal rendering used in every report.
std::string format_score(double s);

enum class StrataMode { kExact, kRanged };

StrataMode parse_strata_mode(const std::string& text);

// Exact: the node count itself. Ranged: -1 for the empty stratum, otherwise
// the 0.1-wide bucket index 0..9.
int range_key(double s);

struct ScoredSite {
  std::string id;
  std::size_t d = 0;
  double score = 0.0;
};

ScoredSite scored(std::string id, std::size_t d);

struct Stratum {
  int key = 0;
  std::size_t population = 0;
  std::size_t sample_size = 0;
  std::vector<std::string> member_ids;
  std::vector<std::string> selected_ids;
};

struct SamplePlan {
  double confidence = 0.95;
  double margin = 0.05;
  std::uint64_t seed = 0;
  std::vector<Stratum> strata;
  std::vector<std::string> selected_ids;
};

// Strata ordered by key; members keep input order.
std::vector<Stratum> stratify(const std::vector<ScoredSite>& sites, StrataMode mode);

// Two-sided standard-normal critical value.
double z_for_confidence(double confidence);

// Infinite-population size z^2 p(1-p) / e^2 with p = 0.5.
double cochran_n0(double confidence, double margin);

// ceil(n0 / (1 + (n0 - 1) / N)), capped at N.
std::size_t cochran_fpc(std::size_t population, double confidence, double margin);

// Census for populations no larger than n0, corrected Cochran above it.
std::size_t sample_size(std::size_t population, double confidence = 0.95,
                        double margin = 0.05);

void assign_sample_sizes(std::vector<Stratum>& strata, double confidence, double margin);

// Uniform selection without replacement inside every stratum. A pure
// function of (strata, seed).
SamplePlan draw_sample(std::vector<Stratum> strata, std::uint64_t seed,
                       double confidence = 0.95, double margin = 0.05);

}  // namespace cryptolens
