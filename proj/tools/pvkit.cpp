#include "pvkit/enumerate.hpp"
#include "pvkit/io.hpp"
#include "pvkit/linalg.hpp"
#include "pvkit/position.hpp"
#include "pvkit/pptes.hpp"
#include "pvkit/registry.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace pvkit;
using nlohmann::json;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitInputError = 2;

struct Options {
  Tolerance tol;
  bool as_json = false;
};

json tolerances_json(const Tolerance& tol) {
  return json{{"rank_rel", tol.rank_rel},
              {"psd_abs", tol.psd_abs},
              {"residual_abs", tol.residual_abs},
              {"dedupe_fid", tol.dedupe_fid}};
}

std::string shape_string(const PartyShape& shape) {
  std::ostringstream out;
  for (std::size_t j = 0; j < shape.dims.size(); ++j) {
    if (j) out << "x";
    out << shape.dims[j];
  }
  return out.str();
}

void print_tolerances(const Tolerance& tol) {
  std::cout << "tolerances: rank_rel=" << tol.rank_rel << " psd_abs=" << tol.psd_abs
            << " residual_abs=" << tol.residual_abs << " dedupe_fid=" << tol.dedupe_fid << "\n";
}

std::string format_complex(const Complex& c) {
  std::ostringstream out;
  out.precision(6);
  out << c.real();
  if (c.imag() != 0.0) out << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
  return out.str();
}

std::string format_vector(const Vector& v) {
  std::ostringstream out;
  out << "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out << ", ";
    out << format_complex(v(k));
  }
  out << ")";
  return out.str();
}

void print_product_vector(const ProductVector& z, const std::string& prefix) {
  std::cout << prefix << "locals:";
  for (const auto& loc : z.locals) std::cout << " " << format_vector(loc);
  std::cout << "\n" << prefix << "flat:   " << format_vector(z.flat) << "\n";
}

Matrix subspace_from_file(const VectorFileData& data, bool complement, const Options& opts) {
  std::vector<Vector> vectors;
  for (const auto& z : data.product_vectors) vectors.push_back(z.flat);
  for (const auto& v : data.flat_vectors) vectors.push_back(v);
  Matrix basis = orthonormalize(vectors, opts.tol);
  if (complement) {
    if (basis.cols() == data.shape.total)
      throw ContractViolation("the listed vectors span the whole space; the complement is empty");
    basis = kernel_basis(basis.adjoint(), opts.tol);
  }
  return basis;
}

// ---------------------------------------------------------------------------

int run_check(const std::string& kind, const std::string& path, const Options& opts) {
  const VectorFileData data = read_vector_file(path, opts.tol);
  if (data.product_vectors.empty())
    throw ParseError("'" + path + "': this command needs product vectors with locals");
  const auto& vs = data.product_vectors;

  bool holds = false;
  json report{{"command", "check " + kind},
              {"shape", data.shape.dims},
              {"vector_count", vs.size()},
              {"tolerances", tolerances_json(opts.tol)}};
  std::ostringstream detail;

  if (kind == "gp") {
    const GpReport r = check_general_position(vs, opts.tol);
    holds = r.is_gp;
    if (r.witness) {
      json w{{"party", r.witness->party + 1}, {"indices", json::array()}};
      detail << "witness: party " << r.witness->party + 1 << ", vectors {";
      for (std::size_t i = 0; i < r.witness->indices.size(); ++i) {
        w["indices"].push_back(r.witness->indices[i] + 1);
        detail << (i ? ", " : "") << r.witness->indices[i] + 1;
      }
      detail << "} have deficient local rank";
      report["witness"] = w;
    }
  } else if (kind == "gupb") {
    const GupbReport r = check_gupb_partition(vs, opts.tol);
    holds = r.is_gupb;
    if (r.bad_partition) {
      json blocks = json::array();
      detail << "failing partition:";
      for (std::size_t j = 0; j < r.bad_partition->size(); ++j) {
        json block = json::array();
        detail << " I" << j + 1 << "={";
        for (std::size_t i = 0; i < (*r.bad_partition)[j].size(); ++i) {
          block.push_back((*r.bad_partition)[j][i] + 1);
          detail << (i ? "," : "") << (*r.bad_partition)[j][i] + 1;
        }
        detail << "}";
        blocks.push_back(block);
      }
      report["bad_partition"] = blocks;
    }
    if (r.witness) {
      json locals = json::array();
      for (const auto& loc : r.witness->locals) {
        json entries = json::array();
        for (Eigen::Index k = 0; k < loc.size(); ++k)
          entries.push_back(json::array({loc(k).real(), loc(k).imag()}));
        locals.push_back(entries);
      }
      report["orthogonal_witness"] = json{{"locals", locals}};
    }
  } else if (kind == "independence") {
    holds = product_vectors_independent(vs, opts.tol);
  } else if (kind == "state-independence") {
    holds = product_states_independent(vs, opts.tol);
  } else {
    throw ContractViolation("unknown check kind '" + kind + "'");
  }

  report["holds"] = holds;
  if (opts.as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "check " << kind << ": " << (holds ? "holds" : "fails") << " (" << vs.size()
              << " vectors, shape " << shape_string(data.shape) << ")\n";
    if (!holds && !detail.str().empty()) std::cout << detail.str() << "\n";
    print_tolerances(opts.tol);
  }
  return holds ? kExitHolds : kExitFails;
}

int run_enumerate(const std::string& path, bool complement_flag, const Options& opts) {
  const VectorFileData data = read_vector_file(path, opts.tol);
  const bool complement =
      complement_flag || (data.subspace_mode && *data.subspace_mode == "complement");
  const Matrix basis = subspace_from_file(data, complement, opts);
  const EnumerationResult res = enumerate_in_subspace(basis, data.shape, opts.tol);

  if (opts.as_json) {
    VectorFileData out;
    out.shape = data.shape;
    out.product_vectors = res.vectors;
    json j = vector_file_json(out);
    j["command"] = "enumerate";
    j["kind"] = res.kind == EnumerationKind::finite ? "finite" : "infinite";
    j["count"] = res.vectors.size();
    j["subspace_dim"] = basis.cols();
    j["charts_visited"] = res.charts_visited;
    j["residual_max"] = res.residual_max;
    j["tolerances"] = tolerances_json(opts.tol);
    std::cout << j.dump(2) << "\n";
    return kExitHolds;
  }

  std::cout << "subspace dimension " << basis.cols() << " of " << data.shape.total << " ("
            << (complement ? "complement" : "span") << " of " << path << ")\n";
  if (res.kind == EnumerationKind::infinite) {
    std::cout << "product vectors: infinite family\n";
  } else {
    std::cout << "product vectors: " << res.vectors.size() << " (charts visited "
              << res.charts_visited << ", max residual " << res.residual_max << ")\n";
    for (std::size_t i = 0; i < res.vectors.size(); ++i) {
      std::cout << "[" << i + 1 << "]\n";
      print_product_vector(res.vectors[i], "  ");
      std::cout << "  residual: " << membership_residual(res.vectors[i], basis) << "\n";
    }
  }
  print_tolerances(opts.tol);
  return kExitHolds;
}

int run_face(const std::string& path, const Options& opts) {
  const VectorFileData data = read_vector_file(path, opts.tol);
  if (data.product_vectors.empty())
    throw ParseError("'" + path + "': this command needs product vectors with locals");
  const FaceCertificate cert = certify_simplicial_face(data.product_vectors, opts.tol);

  const std::string verdict = cert.verdict == FaceVerdict::simplicial_face ? "simplicial-face"
                              : cert.verdict == FaceVerdict::infinite_family
                                  ? "infinite-family"
                                  : "not-simplicial-face";
  if (opts.as_json) {
    json j{{"command", "face"},
           {"verdict", verdict},
           {"k", cert.k},
           {"states_independent", cert.states_independent},
           {"enumeration_kind",
            cert.enumeration.kind == EnumerationKind::finite ? "finite" : "infinite"},
           {"enumeration_count", cert.enumeration.vectors.size()},
           {"tolerances", tolerances_json(opts.tol)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "face certificate: " << verdict << "\n";
    std::cout << "  k: " << cert.k << "\n";
    std::cout << "  product states independent: " << (cert.states_independent ? "yes" : "no")
              << "\n";
    if (cert.enumeration.kind == EnumerationKind::finite)
      std::cout << "  product vectors in span: " << cert.enumeration.vectors.size() << "\n";
    else
      std::cout << "  product vectors in span: infinite family\n";
    if (cert.verdict == FaceVerdict::simplicial_face)
      std::cout << "  the " << cert.k << " states span a simplex face with " << cert.k
                << " vertices\n";
    print_tolerances(opts.tol);
  }
  return cert.verdict == FaceVerdict::simplicial_face ? kExitHolds : kExitFails;
}

json pptes_report_json(const PptesReport& report) {
  json j{{"ranks", report.ranks},
         {"min_eigs", report.min_eigs},
         {"range_products", report.range_products},
         {"kernel_products", report.kernel_products},
         {"range_products_infinite", report.range_products_infinite},
         {"kernel_products_infinite", report.kernel_products_infinite}};
  j["verdict"] = report.verdict == PptesVerdict::pptes_edge_rank4 ? "pptes-edge-rank4"
                 : report.verdict == PptesVerdict::separable      ? "separable"
                                                                  : "inconclusive";
  if (report.gamma_span_dims) j["gamma_span_dims"] = *report.gamma_span_dims;
  return j;
}

void print_pptes_report(const PptesReport& report) {
  std::cout << "  ranks of T(0..3): " << report.ranks[0] << " " << report.ranks[1] << " "
            << report.ranks[2] << " " << report.ranks[3] << "\n";
  std::cout << "  min eigenvalues:  ";
  for (double e : report.min_eigs) std::cout << e << " ";
  std::cout << "\n";
  std::cout << "  product vectors in range:  "
            << (report.range_products_infinite ? std::string("infinite")
                                               : std::to_string(report.range_products))
            << "\n";
  std::cout << "  product vectors in kernel: "
            << (report.kernel_products_infinite ? std::string("infinite")
                                                : std::to_string(report.kernel_products))
            << "\n";
  const char* verdict = report.verdict == PptesVerdict::pptes_edge_rank4 ? "pptes-edge-rank4"
                        : report.verdict == PptesVerdict::separable      ? "separable"
                                                                         : "inconclusive";
  std::cout << "  verdict: " << verdict << "\n";
  const double min_eig = *std::min_element(report.min_eigs.begin(), report.min_eigs.end());
  if (report.verdict != PptesVerdict::pptes_edge_rank4 && min_eig >= -1e-10 &&
      (report.range_products > 0 || report.range_products_infinite))
    std::cout << "  note: PPT with product vectors in the range; consistent with a separable"
                 " state, not a rank-4 edge state\n";
}

int run_pptes_build(const std::string& path, std::string weights_csv, int distinguished,
                    const std::string& out_path, const Options& opts) {
  const VectorFileData data = read_vector_file(path, opts.tol);
  if (data.product_vectors.size() != 6)
    throw ParseError("'" + path + "': pptes build needs exactly six product vectors");
  if (distinguished < 1 || distinguished > 6)
    throw ContractViolation("--distinguished must be between 1 and 6");

  RealVector p = RealVector::Constant(5, 0.2);
  if (!weights_csv.empty()) {
    std::istringstream in(weights_csv);
    std::string item;
    std::vector<double> parsed;
    while (std::getline(in, item, ',')) {
      try {
        parsed.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ContractViolation("--weights: bad number '" + item + "'");
      }
    }
    if (parsed.size() != 5) throw ContractViolation("--weights needs five comma-separated values");
    for (int i = 0; i < 5; ++i) p(i) = parsed[static_cast<std::size_t>(i)];
    if (p.minCoeff() <= 0.0) throw ContractViolation("--weights must be positive");
    if (std::abs(p.sum() - 1.0) > 1e-12) {
      std::cerr << "warning: weights sum to " << p.sum() << "; renormalizing\n";
      p /= p.sum();
    }
  }

  const SixTuple six = SixTuple::make(data.product_vectors, distinguished - 1, opts.tol);
  const BuildResult built = build_rho(six, p, opts.tol);
  PptesReport report = verify_pptes(built.rho, opts.tol);
  report.gamma_span_dims = built.gamma_dims;

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ContractViolation("cannot write '" + out_path + "'");
    out << state_file_json(built.rho).dump(2) << "\n";
  }

  if (opts.as_json) {
    json j{{"command", "pptes build"}, {"tolerances", tolerances_json(opts.tol)}};
    json a = json::array();
    for (int i = 0; i < 5; ++i)
      a.push_back(json::array({built.data.a(i).real(), built.data.a(i).imag()}));
    j["a"] = a;
    j["alpha"] = built.data.S;
    j["lambda"] = built.data.lambda;
    j["weights"] = std::vector<double>(built.data.p.data(), built.data.p.data() + 5);
    j["report"] = pptes_report_json(report);
    if (!out_path.empty()) j["state_file"] = out_path;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "pptes build from " << path << "\n";
    std::cout << "  expansion coefficients a: ";
    for (int i = 0; i < 5; ++i) std::cout << format_complex(built.data.a(i)) << " ";
    std::cout << "\n  alpha (sum |a_i|^2 / p_i): " << built.data.S << "\n";
    std::cout << "  boundary lambda: " << built.data.lambda << "\n";
    std::cout << "  gamma span dims: " << built.gamma_dims[0] << " " << built.gamma_dims[1]
              << " " << built.gamma_dims[2] << "\n";
    print_pptes_report(report);
    if (!out_path.empty()) std::cout << "  state written to " << out_path << "\n";
    print_tolerances(opts.tol);
  }
  return report.verdict == PptesVerdict::pptes_edge_rank4 ? kExitHolds : kExitFails;
}

int run_pptes_verify(const std::string& path, const Options& opts) {
  const StateFileData data = read_state_file(path, opts.tol);
  const PptesReport report = verify_pptes(data.state, opts.tol);
  if (opts.as_json) {
    json j{{"command", "pptes verify"},
           {"report", pptes_report_json(report)},
           {"tolerances", tolerances_json(opts.tol)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "pptes verify " << path << "\n";
    print_pptes_report(report);
    print_tolerances(opts.tol);
  }
  return report.verdict == PptesVerdict::pptes_edge_rank4 ? kExitHolds : kExitFails;
}

int run_example_list(const Options& opts) {
  if (opts.as_json) {
    std::cout << json(example_names()).dump(2) << "\n";
  } else {
    for (const auto& name : example_names()) std::cout << name << "\n";
  }
  return kExitHolds;
}

int run_example_show(const std::string& name, const std::string& select) {
  const NamedExample ex = load_example(name);
  const auto vectors = ex.load_vectors();
  const auto aux = ex.load_auxiliary();

  VectorFileData out;
  out.shape = ex.shape;
  if (select.empty()) {
    out.product_vectors = vectors;
  } else {
    std::istringstream in(select);
    std::string label;
    while (std::getline(in, label, ',')) {
      bool found = false;
      for (std::size_t i = 0; i < ex.product_vectors.size(); ++i)
        if (ex.product_vectors[i].label == label) {
          out.product_vectors.push_back(vectors[i]);
          found = true;
          break;
        }
      if (!found)
        for (std::size_t i = 0; i < ex.auxiliary_vectors.size(); ++i)
          if (ex.auxiliary_vectors[i].label == label) {
            out.flat_vectors.push_back(aux[i]);
            found = true;
            break;
          }
      if (!found)
        throw ContractViolation("example '" + name + "' has no vector labeled '" + label + "'");
    }
  }
  std::cout << vector_file_json(out).dump(2) << "\n";
  return kExitHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pvkit: product vectors in multiqubit subspaces, separable faces, and"
               " rank-four PPT entanglement"};
  app.require_subcommand(1);

  Options opts;
  app.add_flag("--json", opts.as_json, "emit machine-readable JSON reports");
  app.add_option("--tol-rank", opts.tol.rank_rel, "relative singular-value cutoff");
  app.add_option("--tol-psd", opts.tol.psd_abs, "eigenvalue floor for positivity");
  app.add_option("--tol-residual", opts.tol.residual_abs, "membership residual bound");

  std::string check_kind, file_path, weights_csv, out_path, example_name, select;
  bool complement = false;
  int distinguished = 6;

  auto* check = app.add_subcommand("check", "decide a property of a set of product vectors");
  check->fallthrough();
  check->add_option("kind", check_kind, "gp | gupb | independence | state-independence")
      ->required()
      ->check(CLI::IsMember({"gp", "gupb", "independence", "state-independence"}));
  check->add_option("file", file_path, "vector file (JSON)")->required();

  auto* enumerate = app.add_subcommand("enumerate", "find all product vectors in a subspace");
  enumerate->fallthrough();
  enumerate->add_option("file", file_path, "vector file (JSON)")->required();
  enumerate->add_flag("--complement", complement,
                      "use the orthogonal complement of the listed vectors");

  auto* face = app.add_subcommand("face", "certify a unique-decomposition (simplicial) face");
  face->fallthrough();
  face->add_option("file", file_path, "vector file (JSON)")->required();

  auto* pptes = app.add_subcommand("pptes", "build or verify rank-four PPT entangled states");
  pptes->fallthrough();
  pptes->require_subcommand(1);
  auto* build = pptes->add_subcommand("build", "boundary state from six product vectors");
  build->fallthrough();
  build->add_option("file", file_path, "vector file with six product vectors")->required();
  build->add_option("--weights", weights_csv, "five comma-separated positive weights");
  build->add_option("--distinguished", distinguished, "index (1-6) of the expanded vector");
  build->add_option("--out", out_path, "write the built state as a state file");
  auto* verify = pptes->add_subcommand("verify", "classify a three-qubit state");
  verify->fallthrough();
  verify->add_option("file", file_path, "state file (JSON)")->required();

  auto* example = app.add_subcommand("example", "built-in data sets");
  example->fallthrough();
  example->require_subcommand(1);
  auto* list = example->add_subcommand("list", "list the built-in examples");
  list->fallthrough();
  auto* show = example->add_subcommand("show", "emit an example as a vector file");
  show->fallthrough();
  show->add_option("name", example_name, "example name")->required();
  show->add_option("--select", select, "comma-separated vector labels to include");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    opts.tol.validate();
    if (check->parsed()) return run_check(check_kind, file_path, opts);
    if (enumerate->parsed()) return run_enumerate(file_path, complement, opts);
    if (face->parsed()) return run_face(file_path, opts);
    if (pptes->parsed() && build->parsed())
      return run_pptes_build(file_path, weights_csv, distinguished, out_path, opts);
    if (pptes->parsed() && verify->parsed()) return run_pptes_verify(file_path, opts);
    if (example->parsed() && list->parsed()) return run_example_list(opts);
    if (example->parsed() && show->parsed()) return run_example_show(example_name, select);
  } catch (const NoPptBoundary& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFails;
  } catch (const DegenerateGammaSpan& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFails;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ContractViolation& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
