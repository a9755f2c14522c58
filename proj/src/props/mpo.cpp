#include "prexsyn/props/mpo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "prexsyn/chem/smiles.hpp"
#include "prexsyn/util/errors.hpp"

namespace prexsyn::props {

double apply_modifier(Modifier mod, double mu, double sigma, double x) {
  auto gaussian = [&](double v) {
    double z = (v - mu) / sigma;
    return std::exp(-0.5 * z * z);
  };
  switch (mod) {
    case Modifier::Gaussian: return gaussian(x);
    case Modifier::MaxClip: return x <= mu ? 1.0 : gaussian(x);
    case Modifier::MinClip: return x >= mu ? 1.0 : gaussian(x);
    case Modifier::Threshold:
      if (mu <= 0.0) return x > 0.0 ? 1.0 : 0.0;
      return std::clamp(x / mu, 0.0, 1.0);
  }
  return 0.0;
}

double mpo_score(const chem::MolGraph& m, const MpoSpec& spec,
                 const PropertyTables& tables) {
  if (spec.components.empty()) throw InvariantError("empty MPO spec");
  DescriptorVector desc;
  bool have_desc = false;
  double log_sum = 0.0;
  for (const auto& c : spec.components) {
    double raw = 0.0;
    switch (c.kind) {
      case MpoComponent::Kind::Descriptor:
        if (!have_desc) {
          desc = descriptors(m, tables);
          have_desc = true;
        }
        raw = desc.get(c.field);
        break;
      case MpoComponent::Kind::SimStruct:
        raw = tanimoto(fp_struct(m), c.target);
        break;
      case MpoComponent::Kind::SimPharm:
        raw = tanimoto(fp_pharm(m), c.target);
        break;
    }
    double score = apply_modifier(c.modifier, c.mu, c.sigma, raw);
    if (score <= 0.0) return 0.0;
    log_sum += std::log(score);
  }
  return std::exp(log_sum / static_cast<double>(spec.components.size()));
}

namespace {

Modifier modifier_from_name(const std::string& s, int line_no) {
  if (s == "gaussian") return Modifier::Gaussian;
  if (s == "max_clip") return Modifier::MaxClip;
  if (s == "min_clip") return Modifier::MinClip;
  if (s == "threshold") return Modifier::Threshold;
  throw IoError("mpo spec line " + std::to_string(line_no) +
                ": unknown modifier " + s);
}

}  // namespace

MpoSpec parse_mpo_spec(const std::string& text) {
  MpoSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string head;
    ss >> head;
    if (head == "name") {
      ss >> spec.name;
      continue;
    }
    MpoComponent c;
    std::string a, b;
    double mu = 0.0, sigma = 1.0;
    if (head == "descriptor") {
      ss >> a >> b >> mu;
      if (!(ss >> sigma)) sigma = 1.0;
      auto field = descriptor_from_name(a);
      if (!field)
        throw IoError("mpo spec line " + std::to_string(line_no) +
                      ": unknown descriptor " + a);
      c.kind = MpoComponent::Kind::Descriptor;
      c.field = *field;
    } else if (head == "sim_struct" || head == "sim_pharm") {
      ss >> a >> b >> mu;
      if (!(ss >> sigma)) sigma = 1.0;
      auto graph = chem::parse_smiles(a);
      c.kind = head == "sim_struct" ? MpoComponent::Kind::SimStruct
                                    : MpoComponent::Kind::SimPharm;
      c.target =
          head == "sim_struct" ? fp_struct(graph) : fp_pharm(graph);
      c.target_smiles = a;
    } else {
      throw IoError("mpo spec line " + std::to_string(line_no) +
                    ": unknown directive " + head);
    }
    if (ss.fail() && b.empty())
      throw IoError("mpo spec line " + std::to_string(line_no) +
                    ": malformed component");
    c.modifier = modifier_from_name(b, line_no);
    c.mu = mu;
    c.sigma = sigma;
    spec.components.push_back(std::move(c));
  }
  if (spec.components.empty())
    throw IoError("mpo spec contains no components");
  return spec;
}

MpoSpec load_mpo_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open MPO spec " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_mpo_spec(buffer.str());
}

}  // namespace prexsyn::props
