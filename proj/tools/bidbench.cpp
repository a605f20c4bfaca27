// bidbench: synthesize blind image decomposition datasets, enumerate cases,
// score method outputs and render preview sheets.
//
// Exit codes: 0 success, 1 usage, 2 asset error, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bidbench/bidbench.hpp"
#include "bidbench/fixtures.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kAsset = 2, kIo = 3 };

struct SynthArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::string> output;
  std::optional<std::string> mode;
  std::optional<unsigned> threads;
};

int cmd_synth(const SynthArgs& a) {
  auto cfg = bidbench::load_run_config(a.config);
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.samples) cfg.samples = *a.samples;
  if (a.output) cfg.output = *a.output;
  if (a.mode) cfg.mode = bidbench::parse_mode(*a.mode);
  if (a.threads) cfg.threads = *a.threads;
  const auto summary = bidbench::run_synth(cfg);
  const auto def = cfg.task_definition();
  std::cout << "wrote " << summary.samples << " samples to " << cfg.output.string() << "\n";
  std::cout << "manifest: " << summary.manifest_path.string() << "\n";
  for (const auto& [bits, n] : summary.case_counts) {
    const bidbench::CaseMask m(bits);
    std::string names;
    for (int i : m.indices()) names += (names.empty() ? "" : "+") + def.component(i).name;
    std::printf("  %-6s %-40s %llu\n", m.letters().c_str(), names.c_str(), static_cast<unsigned long long>(n));
  }
  return kOk;
}

int cmd_enumerate(int n) {
  const auto cases = bidbench::enumerate_cases(n);
  std::printf("%-6s %-8s %-3s %s\n", "row", "bits", "L", "case");
  int row = 1;
  for (auto c : cases) {
    std::printf("%-6d %-8u %-3d %s\n", row++, c.bits(), c.count(), c.letters().c_str());
  }
  std::printf("total %zu\n", cases.size());
  return kOk;
}

void print_target(const std::string& name, const bidbench::TargetSummary& t) {
  std::printf("    %-12s psnr %8.3f  ssim %.4f", name.c_str(), t.psnr, t.ssim);
  if (t.rmse_all) {
    std::printf("  rmse all %.3f", *t.rmse_all);
    if (t.rmse_shadow) std::printf(" shadow %.3f", *t.rmse_shadow);
    if (t.rmse_non_shadow) std::printf(" non-shadow %.3f", *t.rmse_non_shadow);
  }
  std::printf("\n");
}

int cmd_eval(const std::string& manifest, const std::string& outputs, const std::string& report_path) {
  const std::filesystem::path mpath(manifest);
  const auto manifests = bidbench::read_manifests(mpath);
  const auto report = bidbench::eval_run(manifests, mpath.parent_path(), outputs);
  bidbench::write_report(report, report_path);
  for (const auto& c : report.cases) {
    std::printf("case %-6s (%zu samples)%s\n", c.letters.c_str(), c.samples,
                c.accuracy ? (" acc " + std::to_string(*c.accuracy)).c_str() : "");
    if (c.input) print_target("input", *c.input);
    for (const auto& [name, t] : c.targets) print_target(name, t);
  }
  std::printf("report: %s\n", report_path.c_str());
  return kOk;
}

int cmd_preview(const std::string& manifest, int k, const std::string& out) {
  const auto layout = bidbench::run_preview(manifest, k, out);
  std::printf("preview %s: %d rows x %d tiles\n", out.c_str(), layout.rows, layout.columns);
  return kOk;
}

int cmd_fixtures(const std::string& root, int count, int size, std::uint64_t seed) {
  bidbench::fixtures::write_fixture_tree(root, count, size, seed);
  std::printf("fixture assets and configs written to %s\n", root.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind image decomposition benchmark harness"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize mixed images, ground truths and a manifest");
  synth_cmd->add_option("-c,--config", synth.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--seed", synth.seed, "Master seed");
  synth_cmd->add_option("--samples", synth.samples, "Number of samples");
  synth_cmd->add_option("-o,--output", synth.output, "Output dataset root");
  synth_cmd->add_option("--mode", synth.mode, "train or test")->check(CLI::IsMember({"train", "test"}));
  synth_cmd->add_option("-j,--threads", synth.threads, "Worker threads (0 = all cores)");

  int n = 0;
  auto* enum_cmd = app.add_subcommand("enumerate", "List all 2^N-1 cases");
  enum_cmd->add_option("-n", n, "Number of components")->required();

  std::string manifest, outputs, report_path = "report.json";
  auto* eval_cmd = app.add_subcommand("eval", "Score method outputs against a dataset");
  eval_cmd->add_option("-m,--manifest", manifest, "manifest.jsonl of the dataset")->required();
  eval_cmd->add_option("--outputs", outputs, "Directory of <sample_id>.<target>.png outputs")->required();
  eval_cmd->add_option("-r,--report", report_path, "Report path (JSON)");

  std::string preview_manifest, preview_out = "preview.png";
  int k = 4;
  auto* preview_cmd = app.add_subcommand("preview", "Contact sheet of the first k samples");
  preview_cmd->add_option("-m,--manifest", preview_manifest, "manifest.jsonl of the dataset")->required();
  preview_cmd->add_option("-k", k, "Number of rows");
  preview_cmd->add_option("-o,--out", preview_out, "Output PNG");

  std::string fixture_root;
  int fixture_count = 8, fixture_size = 128;
  std::uint64_t fixture_seed = 7;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write procedural stand-in assets and sample configs");
  fixtures_cmd->add_option("root", fixture_root, "Destination directory")->required();
  fixtures_cmd->add_option("--count", fixture_count, "Files per asset folder");
  fixtures_cmd->add_option("--size", fixture_size, "Square asset size in pixels");
  fixtures_cmd->add_option("--seed", fixture_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth);
    if (*enum_cmd) return cmd_enumerate(n);
    if (*eval_cmd) return cmd_eval(manifest, outputs, report_path);
    if (*preview_cmd) return cmd_preview(preview_manifest, k, preview_out);
    if (*fixtures_cmd) return cmd_fixtures(fixture_root, fixture_count, fixture_size, fixture_seed);
  } catch (const bidbench::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const bidbench::AssetError& e) {
    std::cerr << "asset error: " << e.what() << "\n";
    return kAsset;
  } catch (const bidbench::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
