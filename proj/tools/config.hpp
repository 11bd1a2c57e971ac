#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "incsmooth/bases.hpp"
#include "incsmooth/kernels.hpp"
#include "incsmooth/rules.hpp"
#include "incsmooth/spectrum.hpp"
#include "incsmooth/weights.hpp"
#include "json.hpp"

namespace inctool {

using nlohmann::json;

inline incsmooth::SequenceRule parse_rule(const json& r, const std::string& what) {
  const std::string type = r.at("type").get<std::string>();
  if (type == "builtin_a1") return incsmooth::builtin_a1();
  if (type == "builtin_a2") return incsmooth::builtin_a2();
  if (type == "constant") return incsmooth::constant_rule(r.at("value").get<double>());
  if (type == "affine_log")
    return incsmooth::affine_log_rule(r.at("c0").get<double>(), r.at("c").get<double>());
  if (type == "linear")
    return incsmooth::linear_rule(r.at("c0").get<double>(), r.at("c").get<double>());
  if (type == "power")
    return incsmooth::power_rule(r.at("c0").get<double>(), r.at("p").get<double>());
  if (type == "list") return incsmooth::list_rule(r.at("values").get<std::vector<double>>());
  throw incsmooth::DomainError(what + ": unknown rule type '" + type + "'");
}

inline incsmooth::WeightFamily parse_weights(const json& w) {
  const std::string kind = w.at("kind").get<std::string>();
  if (kind == "polynomial")
    return incsmooth::WeightFamily::polynomial(parse_rule(w.at("a_rule"), "a_rule"),
                                               parse_rule(w.at("r_rule"), "r_rule"));
  if (kind == "subexponential")
    return incsmooth::WeightFamily::subexponential(w.value("base", 2.0),
                                                   parse_rule(w.at("r_rule"), "r_rule"),
                                                   parse_rule(w.at("b_rule"), "b_rule"));
  if (kind == "table") {
    const json& t = w.at("table");
    const auto values = t.at("values").get<std::vector<std::vector<double>>>();
    if (values.empty() || values.front().empty())
      throw incsmooth::DomainError("weight table must be non-empty");
    Eigen::MatrixXd m(values.size(), values.front().size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i].size() != values.front().size())
        throw incsmooth::DomainError("weight table rows must have equal length");
      for (std::size_t k = 0; k < values[i].size(); ++k) m(i, k) = values[i][k];
    }
    const std::string ext = t.value("extension", "none");
    incsmooth::TableExtension e;
    if (ext == "none")
      e = incsmooth::TableExtension::None;
    else if (ext == "constant_tail")
      e = incsmooth::TableExtension::ConstantTail;
    else if (ext == "last_row_geometric")
      e = incsmooth::TableExtension::LastRowGeometric;
    else
      throw incsmooth::DomainError("unknown table extension '" + ext + "'");
    return incsmooth::WeightFamily::table(m, e);
  }
  throw incsmooth::DomainError("unknown weight kind '" + kind + "'");
}

inline incsmooth::BasisFamily parse_basis(const json& cfg) {
  if (!cfg.contains("basis")) return incsmooth::BasisFamily::trigonometric();
  const json& b = cfg.at("basis");
  const std::string kind = b.at("kind").get<std::string>();
  if (kind == "trigonometric") return incsmooth::BasisFamily::trigonometric();
  if (kind == "walsh") return incsmooth::BasisFamily::walsh();
  if (kind == "haar") return incsmooth::BasisFamily::haar();
  if (kind == "jacobi")
    return incsmooth::BasisFamily::jacobi(b.value("alpha", 0.0), b.value("beta", 0.0));
  throw incsmooth::DomainError("unknown basis kind '" + kind + "'");
}

inline incsmooth::SpaceVariant parse_variant(const std::string& v) {
  if (v == "H") return incsmooth::SpaceVariant::H;
  if (v == "G") return incsmooth::SpaceVariant::G;
  if (v == "F") return incsmooth::SpaceVariant::F;
  if (v == "Gc") return incsmooth::SpaceVariant::Gc;
  if (v == "Fc") return incsmooth::SpaceVariant::Fc;
  throw incsmooth::DomainError("unknown space variant '" + v + "'");
}

inline incsmooth::StreamConfig parse_stream_config(const json& cfg) {
  incsmooth::StreamConfig sc;
  if (!cfg.contains("space")) return sc;
  const json& s = cfg.at("space");
  sc.variant = parse_variant(s.value("variant", "H"));
  sc.j_max = s.value("j_max", sc.j_max);
  sc.finite_coordinates = s.value("finite_coordinates", false);
  sc.c = s.value("c", 1.0);
  sc.tie_tol = s.value("tie_tol", sc.tie_tol);
  return sc;
}

// The univariate / product member a kernel or norm command operates on.
inline incsmooth::SpaceSpec parse_space_spec(const json& cfg) {
  incsmooth::SpaceSpec spec;
  spec.basis = parse_basis(cfg);
  spec.weights = parse_weights(cfg.at("weights"));
  const json s = cfg.value("space", json::object());
  const std::string variant = s.value("variant", "H");
  const bool product = s.value("product", false);
  using K = incsmooth::SpaceFamilyKind;
  if (product) {
    if (variant == "H")
      spec.family = K::ProdH;
    else if (variant == "G")
      spec.family = K::ProdG;
    else if (variant == "F")
      spec.family = K::ProdF;
    else
      throw incsmooth::DomainError("product members exist for variants H, G, F only");
  } else {
    if (variant == "H")
      spec.family = K::UniH;
    else if (variant == "G")
      spec.family = K::UniG;
    else if (variant == "F")
      spec.family = K::UniF;
    else if (variant == "Gc")
      spec.family = K::UniGc;
    else if (variant == "Fc")
      spec.family = K::UniFc;
    else
      throw incsmooth::DomainError("unknown space variant '" + variant + "'");
  }
  spec.j = s.value("j", 1);
  spec.c = s.value("c", 1.0);
  spec.nu_max = s.value("nu_max", spec.nu_max);
  spec.j_max = s.value("j_max", spec.j_max);
  if (spec.basis.kind() == incsmooth::BasisKind::Jacobi) {
    const double a = spec.basis.jacobi_alpha(), b = spec.basis.jacobi_beta();
    spec.anchor = (b - a) / (a + b + 2.0);  // zero of e_1
  }
  spec.anchor = s.value("anchor", spec.anchor);
  return spec;
}

}  // namespace inctool
