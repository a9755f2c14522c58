#include "prexsyn/props/prompt.hpp"

namespace prexsyn::props {

std::string_view property_type_name(PropertyType t) {
  switch (t) {
    case PropertyType::FpStruct: return "fp_struct";
    case PropertyType::FpPharm: return "fp_pharm";
    case PropertyType::Fragments: return "fragments";
    case PropertyType::Descriptors: return "descriptors";
    case PropertyType::Substruct: return "substruct";
  }
  return "?";
}

PropertyPrompt PropertyPrompt::fp_struct_of(const chem::MolGraph& m) {
  PropertyPrompt p;
  p.type = PropertyType::FpStruct;
  p.fp = fp_struct(m);
  return p;
}

PropertyPrompt PropertyPrompt::fp_pharm_of(const chem::MolGraph& m) {
  PropertyPrompt p;
  p.type = PropertyType::FpPharm;
  p.fp = fp_pharm(m);
  return p;
}

PropertyPrompt PropertyPrompt::fragments_of(const chem::MolGraph& m) {
  PropertyPrompt p;
  p.type = PropertyType::Fragments;
  p.frags = fragments(m);
  return p;
}

PropertyPrompt PropertyPrompt::descriptors_of(const chem::MolGraph& m) {
  PropertyPrompt p;
  p.type = PropertyType::Descriptors;
  p.desc = descriptors(m);
  return p;
}

PropertyPrompt PropertyPrompt::substruct(FragmentSet ids) {
  PropertyPrompt p;
  p.type = PropertyType::Substruct;
  p.frags = std::move(ids);
  return p;
}

PropertyPrompt compute_prompt(const chem::MolGraph& m, PropertyType type,
                              Rng& rng) {
  switch (type) {
    case PropertyType::FpStruct: return PropertyPrompt::fp_struct_of(m);
    case PropertyType::FpPharm: return PropertyPrompt::fp_pharm_of(m);
    case PropertyType::Fragments: return PropertyPrompt::fragments_of(m);
    case PropertyType::Descriptors: return PropertyPrompt::descriptors_of(m);
    case PropertyType::Substruct: {
      FragmentSet all = fragments(m);
      FragmentSet subset;
      if (!all.ids.empty()) {
        for (auto id : all.ids)
          if (uniform_real(rng) < 0.5) subset.ids.push_back(id);
        if (subset.ids.empty())
          subset.ids.push_back(
              all.ids[uniform_index(rng, all.ids.size())]);
      }
      return PropertyPrompt::substruct(std::move(subset));
    }
  }
  throw InvariantError("unknown property type");
}

}  // namespace prexsyn::props
