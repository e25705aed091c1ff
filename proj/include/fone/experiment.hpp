#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fone/design.hpp"
#include "fone/model.hpp"
#include "fone/tuning.hpp"

namespace fone {

enum class EstimatorKind { Init, Sgd, Dcsgd, DisFone, Erm, SigmaInvW, Variance };

const char* estimator_name(EstimatorKind kind);
EstimatorKind parse_estimator(const std::string& name);

// One experiment cell. Zero / negative sentinels mean "derive the default":
// batch 0 -> floor(p ln n_machine); rounds -1 -> 20 smooth / 80 quantile;
// n0 0 -> 10p; tau_n / eta_inference 0 -> the theorem-driven defaults;
// t_inference 0 -> ceil((ln n)^2 / eta).
struct ExperimentSpec {
  LossKind model = LossKind::Logistic;
  double tau = 0.25;  // quantile level (quantile model only)
  CovKind design = CovKind::Identity;
  double corr = 0.0;  // design dependence parameter (Toeplitz / EquiCorr)
  Index n = 100'000;
  Index p = 100;
  Index machines = 20;
  Index n1 = 0;  // explicit first-shard size; 0 = even split
  Index batch = 0;
  double alpha = 1.0;
  Index rounds = -1;      // K
  Index inner_iters = 20;  // T
  Index n0 = 0;
  Index reps = 100;
  std::uint64_t seed = 20240605;
  std::vector<EstimatorKind> estimators = {EstimatorKind::Init, EstimatorKind::Sgd,
                                           EstimatorKind::Dcsgd, EstimatorKind::DisFone,
                                           EstimatorKind::Erm};
  CandidateGrid grid = CandidateGrid::default_grid();
  bool fix_theta_raw = false;
  bool retune_per_rep = false;
  bool record_timing = true;
  std::int64_t mc_draws = 1'000'000;  // logistic population oracle (inference rows)
  double tau_n = 0.0;
  double eta_inference = 0.0;
  Index t_inference = 0;
  double erm_tol = 1e-8;
  Index erm_max_iter = 50'000;
  double quantile_step_c = 0.5;
};

// Derived values.
Index resolved_rounds(const ExperimentSpec& spec);
Index resolved_n0(const ExperimentSpec& spec);
bool wants(const ExperimentSpec& spec, EstimatorKind kind);

// Throws std::invalid_argument listing every violated constraint.
void validate(const ExperimentSpec& spec);

// Plain-text key-value round trip ("key = value", '#' comments). Unknown
// keys are errors. serialize emits every field in a fixed order, so the text
// (and therefore the hash) is canonical.
std::string serialize_spec(const ExperimentSpec& spec);
ExperimentSpec parse_spec_text(const std::string& text);
ExperimentSpec parse_spec_file(const std::string& path);
void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value);

// FNV-1a 64-bit digest of arbitrary text as a 16-digit hex string.
std::string fnv1a_hex(const std::string& text);

// fnv1a_hex over the canonical serialization.
std::string spec_hash(const ExperimentSpec& spec);

}  // namespace fone
