#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvlc/metric.hpp"
#include "mvlc/metric_spec.hpp"

namespace mvlc {

// A built-in metric with documented ground truth. Entries that are
// expressible in the TOML dialect also carry a MetricSpec for export; the
// programmatic MetricFunction may additionally provide analytic derivatives.
struct GalleryEntry {
  std::string name;
  std::string description;
  MetricFunction metric;
  std::optional<MetricSpec> spec;
};

const std::vector<GalleryEntry>& gallery_list();

// Throws DomainError for unknown names.
const GalleryEntry& gallery_entry(const std::string& name);

// g(x) = exp(M(x)) for a seeded random Hermitian-matrix-valued polynomial M
// of total degree <= degree; positive definite by construction.
MetricFunction random_metric(uint64_t seed, int n, int r, int degree = 2);

}  // namespace mvlc
