// weldcreep <stage> --config <file> [--out dir] [--nr N] [--nz N]
//           [--disc-basis on|off] [--quad-order Q] [--line-r r1,r2] [--s s1,s2]
#include "weldcreep/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace weldcreep::cli;
  CLI::App app{"Steady creep of welded pressurized pipes"};
  std::string stage, config_path, out_dir = ".", disc;
  std::optional<int> nr, nz, quad;
  std::vector<double> line_r, s_values;

  app.add_option("stage", stage, "baseline | jumps | ritz | kantorovich | solve | compare | sweep")
      ->required()
      ->check(CLI::IsMember({"baseline", "jumps", "ritz", "kantorovich", "solve", "compare", "sweep"}));
  app.add_option("--config", config_path, "problem file (YAML)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--nr", nr, "radial basis size");
  app.add_option("--nz", nz, "axial basis size");
  app.add_option("--disc-basis", disc, "discontinuous basis members")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--quad-order", quad, "Gauss points per cell");
  app.add_option("--line-r", line_r, "sample radii")->delimiter(',');
  app.add_option("--s", s_values, "perturbation parameters for sweep")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  try {
    ParsedInput in = load_config(config_path);
    RunManifest& m = in.manifest;
    m.stage = parse_stage(stage);
    m.out_dir = out_dir;
    if (nr) m.nr = *nr;
    if (nz) m.nz = *nz;
    if (quad) m.quad_order = *quad;
    if (!disc.empty()) m.disc_basis = disc == "on";
    if (!line_r.empty()) m.line_r = line_r;
    if (!s_values.empty()) m.s_values = s_values;
    return run_stage(in.config, m, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
