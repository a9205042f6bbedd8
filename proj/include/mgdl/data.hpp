#pragma once

#include <map>
#include <string>
#include <vector>

#include "mgdl/matrix.hpp"

namespace mgdl {

/// Paired (inputs, targets) table; one sample per row.
struct SampleSet {
  Matrix inputs;
  Matrix targets;
};

/// How a dataset was generated: generator id, seeds, and (for oscillatory
/// targets) the drawn phases, so runs can be audited and regenerated.
struct Provenance {
  std::string generator;
  std::map<std::string, std::string> fields;
  std::vector<double> phases;
};

struct DatasetSplit {
  SampleSet train;
  SampleSet validation;
  SampleSet test;
  Provenance provenance;
};

}  // namespace mgdl
