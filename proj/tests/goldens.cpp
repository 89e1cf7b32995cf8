// Golden values: `goldens <dir> --write` regenerates <dir>/values.json and the
// structure files; `goldens <dir>` recomputes and compares.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "crlab/analysis.hpp"
#include "crlab/cli.hpp"
#include "crlab/operators.hpp"
#include "crlab/spectral.hpp"

using namespace crlab;
namespace fs = std::filesystem;

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kFieldTol = 1e-12;

StructureData solve(const ModelSpec& spec) { return solve_structure(build_coframe(spec)); }

Complex at_first_sample(const Field& f) { return f.evaluate(default_samples().front()); }

nlohmann::json compute_values() {
  nlohmann::json v;
  v["volume"] = volume();

  const StructureData sphere = solve(ModelSpec::sphere());
  v["sphere"]["R"] = at_first_sample(sphere.R).real();
  const Field h = parse_exponent("re_zwbar");
  v["sphere"]["sublaplacian_re_zwbar"] = (at_first_sample(sublaplacian(h, sphere)) / at_first_sample(h)).real();
  for (int N : {2, 4, 6, 8}) {
    const SpectralReport r = eigensolve(assemble(sphere, N));
    v["sphere"]["kernel_dim"][std::to_string(N)] = r.kernel_dim;
    v["sphere"]["Lambda"][std::to_string(N)] = r.Lambda;
  }

  const StructureData li = solve(ModelSpec::left_invariant(1.1));
  v["left_invariant_1.1"]["R"] = at_first_sample(li.R).real();
  v["left_invariant_1.1"]["A11_imag"] = at_first_sample(li.A11).imag();
  v["left_invariant_1.1"]["Q"] = at_first_sample(q_curvature(li).Q).real();
  const Complex q11 = at_first_sample(cartan_tensor(li).value);
  v["left_invariant_1.1"]["Q11"] = {q11.real(), q11.imag()};
  v["left_invariant_1.1"]["P0_min_eigenvalue_N4"] = eigensolve(assemble(li, 4)).eigenvalues.front();

  constexpr int N = 6;
  for (const auto& [key, base] : {std::pair{"perturbed_sphere", ModelSpec::sphere()},
                                  std::pair{"perturbed_left_invariant_1.1", ModelSpec::left_invariant(1.1)}}) {
    const StructureData sd = solve(ModelSpec::perturbed(base, h, 0.1, 12, kDefaultWorkDegree + N));
    const SpectralReport r = eigensolve(assemble(sd, N));
    const KohnDecomposition dec = kohn_decompose({construct_sigma(sd).sigma.s1bar}, sd, 8);
    const BoundCheck b = check_bound_2018H(sd, dec.u(), q_curvature(sd).Q, r);
    v[key]["Lambda_N6"] = r.Lambda;
    v[key]["kernel_dim_N6"] = r.kernel_dim;
    v[key]["bound_margin_N6"] = b.margin;
    v[key]["gamma_norm"] = dec.gamma_norm;
  }
  return v;
}

// Relative comparison of numeric leaves; integers must match exactly.
int compare(const nlohmann::json& want, const nlohmann::json& got, const std::string& path) {
  if (want.is_object()) {
    int bad = 0;
    for (const auto& [k, w] : want.items()) {
      if (!got.contains(k)) {
        std::printf("missing %s/%s\n", path.c_str(), k.c_str());
        ++bad;
      } else {
        bad += compare(w, got.at(k), path + "/" + k);
      }
    }
    return bad;
  }
  if (want.is_array()) {
    int bad = 0;
    for (std::size_t i = 0; i < want.size(); ++i) bad += compare(want[i], got.at(i), path + "/" + std::to_string(i));
    return bad;
  }
  if (want.is_number_integer()) {
    if (want == got) return 0;
    std::printf("%s: expected %s, got %s\n", path.c_str(), want.dump().c_str(), got.dump().c_str());
    return 1;
  }
  const double w = want.get<double>(), g = got.get<double>();
  const double err = std::abs(w - g) / std::max(1.0, std::abs(w));
  if (err <= kRelTol) return 0;
  std::printf("%s: expected %.17g, got %.17g\n", path.c_str(), w, g);
  return 1;
}

int compare_field(const fs::path& file, const char* key, const Field& got) {
  std::ifstream in(file);
  const nlohmann::json j = nlohmann::json::parse(in);
  const double err = sup_norm(field_from_json(j.at(key)) - got);
  if (err <= kFieldTol) return 0;
  std::printf("%s %s: sup difference %.3g\n", file.filename().c_str(), key, err);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: goldens <dir> [--write]\n");
    return 2;
  }
  const fs::path dir = argv[1];
  const bool write = argc > 2 && std::string(argv[2]) == "--write";
  const nlohmann::json values = compute_values();
  const StructureData sphere = solve(ModelSpec::sphere());
  const StructureData li = solve(ModelSpec::left_invariant(1.1));

  if (write) {
    fs::create_directories(dir);
    std::ofstream(dir / "values.json") << values.dump(2) << '\n';
    std::ofstream(dir / "sphere_structure.json") << to_json(sphere).dump(2) << '\n';
    std::ofstream(dir / "left_invariant_1.1_structure.json") << to_json(li).dump(2) << '\n';
    std::printf("wrote goldens to %s\n", dir.c_str());
    return 0;
  }

  std::ifstream in(dir / "values.json");
  if (!in) {
    std::printf("cannot open %s\n", (dir / "values.json").c_str());
    return 1;
  }
  int bad = compare(nlohmann::json::parse(in), values, "");
  for (const auto& [file, sd] : {std::pair{"sphere_structure.json", &sphere},
                                 std::pair{"left_invariant_1.1_structure.json", &li}}) {
    bad += compare_field(dir / file, "R", sd->R);
    bad += compare_field(dir / file, "A11", sd->A11);
    bad += compare_field(dir / file, "omega0", sd->omega0);
  }
  std::printf("goldens %s: %s\n", dir.c_str(), bad == 0 ? "match" : "MISMATCH");
  return bad == 0 ? 0 : 1;
}
