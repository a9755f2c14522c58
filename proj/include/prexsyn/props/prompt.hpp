#pragma once

#include <cstdint>
#include <string_view>

#include "prexsyn/props/descriptors.hpp"
#include "prexsyn/props/fingerprint.hpp"
#include "prexsyn/props/fragments.hpp"
#include "prexsyn/util/rng.hpp"

namespace prexsyn::props {

enum class PropertyType : std::uint8_t {
  FpStruct = 0,
  FpPharm = 1,
  Fragments = 2,
  Descriptors = 3,
  Substruct = 4,
};

inline constexpr int kPropertyTypeCount = 5;

std::string_view property_type_name(PropertyType t);

// Tagged property value used to condition the model. Exactly the payload
// matching `type` is meaningful.
struct PropertyPrompt {
  PropertyType type = PropertyType::FpStruct;
  Fingerprint fp;        // FpStruct / FpPharm
  FragmentSet frags;     // Fragments / Substruct
  DescriptorVector desc; // Descriptors

  static PropertyPrompt fp_struct_of(const chem::MolGraph& m);
  static PropertyPrompt fp_pharm_of(const chem::MolGraph& m);
  static PropertyPrompt fragments_of(const chem::MolGraph& m);
  static PropertyPrompt descriptors_of(const chem::MolGraph& m);
  static PropertyPrompt substruct(FragmentSet ids);
};

// Training-time prompt: the property of `m` for the given type. Substruct
// prompts take a random nonempty subset of the molecule's fragments, which
// is what teaches "contains these fragments" conditioning.
PropertyPrompt compute_prompt(const chem::MolGraph& m, PropertyType type,
                              Rng& rng);

}  // namespace prexsyn::props
