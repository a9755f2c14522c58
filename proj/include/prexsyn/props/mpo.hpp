#pragma once

#include <string>
#include <vector>

#include "prexsyn/props/descriptors.hpp"
#include "prexsyn/props/fingerprint.hpp"

namespace prexsyn::props {

enum class Modifier : std::uint8_t {
  Gaussian,   // exp(-(x-mu)^2 / (2 sigma^2))
  MaxClip,    // 1 for x <= mu, gaussian tail above
  MinClip,    // 1 for x >= mu, gaussian tail below
  Threshold,  // clamp(x / mu, 0, 1)
};

struct MpoComponent {
  enum class Kind : std::uint8_t { Descriptor, SimStruct, SimPharm } kind =
      Kind::Descriptor;
  DescriptorField field = DescriptorField::MW;
  Fingerprint target;  // Sim* kinds
  std::string target_smiles;
  Modifier modifier = Modifier::Gaussian;
  double mu = 0.0;
  double sigma = 1.0;
};

struct MpoSpec {
  std::string name;
  std::vector<MpoComponent> components;
};

double apply_modifier(Modifier mod, double mu, double sigma, double x);

// Geometric mean of component scores; exactly 0 when any component is 0.
double mpo_score(const chem::MolGraph& m, const MpoSpec& spec,
                 const PropertyTables& tables = PropertyTables::builtin());

// Text format, one component per line:
//   name <identifier>
//   descriptor <field> <gaussian|max_clip|min_clip|threshold> <mu> [sigma]
//   sim_struct <smiles> <modifier> <mu> [sigma]
//   sim_pharm <smiles> <modifier> <mu> [sigma]
MpoSpec load_mpo_spec(const std::string& path);
MpoSpec parse_mpo_spec(const std::string& text);

}  // namespace prexsyn::props
