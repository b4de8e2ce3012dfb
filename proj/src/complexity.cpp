#include "cryptolens/complexity.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace cryptolens {

std::size_t count_d(const InvocationSite& site) {
  if (site.no_body || site.subtree == nullptr) {
    return 0;
  }
  return site.subtree->descendant_count();
}

double score(long long d) {
  if (d < 0) {
    throw std::invalid_argument("node count must be nonnegative");
  }
  if (d == 0) {
    return -1.0;
  }
  return std::tanh(std::log10(static_cast<double>(d)));
}

std::string format_score(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  std::string out = buf;
  if (out == "-0.000000") {
    out = "0.000000";
  }
  return out;
}

StrataMode parse_strata_mode(const std::string& text) {
  if (text == "exact") return StrataMode::kExact;
  if (text == "ranged") return StrataMode::kRanged;
  throw std::invalid_argument("strata mode must be exact or ranged: " + text);
}

int range_key(double s) {
  if (s <= -1.0) {
    return -1;
  }
  // Negative scores only occur for d = 0; anything in (-1, 0) joins bucket 0.
  int k = static_cast<int>(std::floor(s * 10.0));
  return std::clamp(k, 0, 9);
}

ScoredSite scored(std::string id, std::size_t d) {
  return ScoredSite{std::move(id), d, score(static_cast<long long>(d))};
}

std::vector<Stratum> stratify(const std::vector<ScoredSite>& sites, StrataMode mode) {
  std::map<int, Stratum> by_key;
  for (const auto& s : sites) {
    int key = mode == StrataMode::kExact ? static_cast<int>(s.d) : range_key(s.score);
    Stratum& st = by_key[key];
    st.key = key;
    st.population++;
    st.member_ids.push_back(s.id);
  }
  std::vector<Stratum> out;
  out.reserve(by_key.size());
  for (auto& [k, st] : by_key) {
    out.push_back(std::move(st));
  }
  return out;
}

namespace {

void check_params(double confidence, double margin) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  if (!(margin > 0.0) || !std::isfinite(margin)) {
    throw std::invalid_argument("margin must be positive");
  }
}

}  // namespace

double z_for_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + confidence / 2.0);
}

double cochran_n0(double confidence, double margin) {
  check_params(confidence, margin);
  double z = z_for_confidence(confidence);
  return z * z * 0.25 / (margin * margin);
}

std::size_t cochran_fpc(std::size_t population, double confidence, double margin) {
  double n0 = cochran_n0(confidence, margin);
  if (population == 0) {
    return 0;
  }
  double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
  auto rounded = static_cast<std::size_t>(std::ceil(n));
  return std::min(rounded, population);
}

std::size_t sample_size(std::size_t population, double confidence, double margin) {
  double n0 = cochran_n0(confidence, margin);
  if (static_cast<double>(population) <= n0) {
    return population;
  }
  return cochran_fpc(population, confidence, margin);
}

void assign_sample_sizes(std::vector<Stratum>& strata, double confidence, double margin) {
  for (auto& s : strata) {
    s.sample_size = sample_size(s.population, confidence, margin);
  }
}

namespace {

// Rejection sampling keeps results identical across standard libraries,
// which std::uniform_int_distribution does not promise.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

SamplePlan draw_sample(std::vector<Stratum> strata, std::uint64_t seed, double confidence,
                       double margin) {
  SamplePlan plan;
  plan.confidence = confidence;
  plan.margin = margin;
  plan.seed = seed;
  std::mt19937_64 rng(seed);
  std::sort(strata.begin(), strata.end(),
            [](const Stratum& a, const Stratum& b) { return a.key < b.key; });
  for (auto& st : strata) {
    if (st.population != st.member_ids.size()) {
      throw std::invalid_argument("stratum population does not match its members");
    }
    if (st.sample_size > st.population) {
      throw std::invalid_argument("sample size exceeds stratum population");
    }
    std::vector<std::size_t> idx(st.population);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < st.sample_size; ++i) {
      std::size_t j = i + bounded(rng, st.population - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(st.sample_size);
    std::sort(idx.begin(), idx.end());
    st.selected_ids.clear();
    for (auto i : idx) {
      st.selected_ids.push_back(st.member_ids[i]);
      plan.selected_ids.push_back(st.member_ids[i]);
    }
  }
  plan.strata = std::move(strata);
  return plan;
}

}  // namespace cryptolens
