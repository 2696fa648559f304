// planforge command-line tool: synthetic scene generation, floorplan
// reconstruction, evaluation, SVG rendering and runtime benchmarks.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "planforge/error.hpp"
#include "planforge/io.hpp"
#include "planforge/log.hpp"
#include "planforge/metrics.hpp"
#include "planforge/pipeline.hpp"

namespace fs = std::filesystem;
using namespace planforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitInternal = 4;

struct GenOptions {
  int count = 10;
  std::uint64_t seed = 0;
  int max_rooms = 10;
  double noise_density = 250.0;
  double rotation_deg = 0.0;
  double super_room_prob = 0.2;
  std::string out_dir = "scenes";
};

int run_gen(const GenOptions& opt) {
  fs::create_directories(opt.out_dir);
  nlohmann::json manifest;
  manifest["scenes"] = nlohmann::json::array();
  for (int i = 0; i < opt.count; ++i) {
    synthgen::SceneSpec spec;
    spec.rng_seed = opt.seed + static_cast<std::uint64_t>(i);
    spec.n_rooms_max = opt.max_rooms;
    spec.points_per_wall_density = opt.noise_density;
    spec.rotation_range_deg = opt.rotation_deg;
    spec.super_room_prob = opt.super_room_prob;
    auto [cloud, gt] = synthgen::generate_scene(spec);

    char name[64];
    std::snprintf(name, sizeof(name), "scene_%04d.json", i);
    const std::string path = (fs::path(opt.out_dir) / name).string();
    io::write_scene(path, io::Scene{std::move(cloud), std::move(gt)});
    manifest["scenes"].push_back(name);
    PLANFORGE_INFO("wrote %s", path.c_str());
  }
  io::write_file((fs::path(opt.out_dir) / "manifest.json").string(), manifest.dump(2));
  return kExitOk;
}

struct ReconstructOptions {
  std::string scene_path;
  std::string votes = "oracle";
  double noise_sigma = 0.0;
  double outlier_frac = 0.0;
  std::uint64_t seed = 0;
  double eps_room = 0.05;
  double eps_wall = 0.025;
  int threads = 1;
  std::string out = "floorplan.json";
  std::string svg;
};

int run_reconstruct(const ReconstructOptions& opt) {
  io::Scene scene = io::read_scene(opt.scene_path);

  pipeline::PipelineConfig cfg;
  cfg.noise.sigma = opt.noise_sigma;
  cfg.noise.outlier_fraction = opt.outlier_frac;
  cfg.noise.rng_seed = opt.seed;
  cfg.subsample_seed = opt.seed;
  cfg.room_dbscan.eps = opt.eps_room;
  cfg.wall_dbscan.eps = opt.eps_wall;
  cfg.threads = opt.threads;

  std::optional<votes::VoteSet> external;
  if (opt.votes != "oracle") external = io::read_votes(opt.votes);

  pipeline::ReconstructionResult res = reconstruct(scene.cloud, external, cfg);
  const auto& t = res.timings;
  PLANFORGE_INFO(
      "timings: subsample %.3fs seeds %.3fs votes %.3fs cluster %.3fs perimeter %.3fs "
      "assembly %.3fs total %.3fs",
      t.subsample_s, t.seeds_s, t.votes_s, t.cluster_s, t.perimeter_s, t.assembly_s,
      t.total_s);
  PLANFORGE_INFO("rooms: %d reconstructed, %d dropped", res.rooms_found, res.rooms_dropped);

  io::write_floorplan(opt.out, res.plan);
  if (!opt.svg.empty()) io::write_file(opt.svg, io::render_svg(res.plan));
  if (res.plan.rooms.empty()) {
    std::fprintf(stderr, "no rooms found; empty plan written to %s\n", opt.out.c_str());
    return kExitEmpty;
  }
  return kExitOk;
}

assembly::Floorplan load_plan_or_scene_gt(const std::string& path) {
  const std::string text = io::read_file(path);
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.contains("gt_rooms")) {
    return io::plan_from_ground_truth(io::scene_from_json(text).gt);
  }
  return io::floorplan_from_json(text);
}

struct EvalOptions {
  std::string gt_path;
  std::string pred_path;
  std::string out;
  std::string batch_manifest;
  std::string pred_dir;
  std::string csv = "eval.csv";
  int grid = 256;
};

int run_eval_batch(const EvalOptions& opt) {
  const fs::path manifest_path(opt.batch_manifest);
  nlohmann::json manifest = nlohmann::json::parse(io::read_file(opt.batch_manifest));
  metrics::EvalConfig cfg;
  cfg.grid = opt.grid;

  std::string csv = "scene,corner_precision,corner_recall,edge_precision,edge_recall,"
                    "room_precision,room_recall\n";
  double sums[6] = {0, 0, 0, 0, 0, 0};
  int n = 0;
  for (const auto& entry : manifest.at("scenes")) {
    const std::string name = entry.get<std::string>();
    const fs::path scene_path = manifest_path.parent_path() / name;
    const fs::path pred_path =
        fs::path(opt.pred_dir) / (fs::path(name).stem().string() + ".plan.json");
    assembly::Floorplan gt = load_plan_or_scene_gt(scene_path.string());
    assembly::Floorplan pred = io::read_floorplan(pred_path.string());
    metrics::MetricsReport r = metrics::evaluate(gt, pred, cfg);
    const double vals[6] = {r.corner_precision, r.corner_recall, r.edge_precision,
                            r.edge_recall,      r.room_precision, r.room_recall};
    char row[256];
    std::snprintf(row, sizeof(row), "%s,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", name.c_str(),
                  vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]);
    csv += row;
    for (int i = 0; i < 6; ++i) sums[i] += vals[i];
    ++n;
  }
  if (n > 0) {
    char row[256];
    std::snprintf(row, sizeof(row), "mean,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", sums[0] / n,
                  sums[1] / n, sums[2] / n, sums[3] / n, sums[4] / n, sums[5] / n);
    csv += row;
  }
  io::write_file(opt.csv, csv);
  std::printf("%s", csv.c_str());
  return kExitOk;
}

int run_eval(const EvalOptions& opt) {
  if (!opt.batch_manifest.empty()) return run_eval_batch(opt);
  metrics::EvalConfig cfg;
  cfg.grid = opt.grid;
  assembly::Floorplan gt = load_plan_or_scene_gt(opt.gt_path);
  assembly::Floorplan pred = load_plan_or_scene_gt(opt.pred_path);
  metrics::MetricsReport r = metrics::evaluate(gt, pred, cfg);
  const std::string text = io::report_to_json(r);
  if (!opt.out.empty()) io::write_file(opt.out, text);
  std::printf("%s\n", text.c_str());
  return kExitOk;
}

int run_render(const std::string& plan_path, const std::string& out) {
  assembly::Floorplan plan = io::read_floorplan(plan_path);
  io::write_file(out, io::render_svg(plan));
  return kExitOk;
}

synthgen::SceneSpec stress_spec(int rooms) {
  // Search seeds for a layout that actually reaches the requested room count.
  synthgen::SceneSpec spec;
  spec.n_rooms_max = rooms;
  spec.super_room_prob = 0.0;
  spec.points_per_wall_density = 400.0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    spec.rng_seed = seed;
    if (synthgen::generate_layout(spec).num_rooms() == rooms) return spec;
  }
  return spec;
}

int run_bench(int threads) {
  using Clock = std::chrono::steady_clock;

  // Single-threaded reconstruction of a 10-room, 16384-point scene.
  {
    synthgen::SceneSpec spec = stress_spec(10);
    auto [cloud, gt] = synthgen::generate_scene(spec);
    pipeline::PipelineConfig cfg;
    auto t0 = Clock::now();
    auto res = pipeline::reconstruct(cloud, std::nullopt, cfg);
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("10-room scene (%zu pts, 1 thread): %.3f s, %d rooms\n", cloud.size(), s,
                res.rooms_found);
  }

  // Thread scaling on a 20-room stress scene.
  {
    synthgen::SceneSpec spec = stress_spec(20);
    auto [cloud, gt] = synthgen::generate_scene(spec);
    pipeline::PipelineConfig cfg;
    cfg.num_seeds = 4096;  // more seeds so every wall keeps enough votes
    double t1 = 0.0, tn = 0.0;
    for (int t : {1, threads}) {
      cfg.threads = t;
      auto t0 = Clock::now();
      auto res = pipeline::reconstruct(cloud, std::nullopt, cfg);
      double s = std::chrono::duration<double>(Clock::now() - t0).count();
      std::printf("20-room scene (%zu pts, %d threads): %.3f s, %d rooms\n", cloud.size(), t,
                  s, res.rooms_found);
      (t == 1 ? t1 : tn) = s;
    }
    if (tn > 0.0) std::printf("speedup 1 -> %d threads: %.2fx\n", threads, t1 / tn);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planforge: floorplan reconstruction from labeled indoor point clouds"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate synthetic labeled scenes");
  cmd_gen->add_option("--count", gen.count, "number of scenes");
  cmd_gen->add_option("--seed", gen.seed, "base RNG seed");
  cmd_gen->add_option("--max-rooms", gen.max_rooms, "maximum rooms per scene");
  cmd_gen->add_option("--density", gen.noise_density, "points per wall area unit");
  cmd_gen->add_option("--rotation", gen.rotation_deg, "rotation augmentation range (deg)");
  cmd_gen->add_option("--super-room-prob", gen.super_room_prob, "super-room probability");
  cmd_gen->add_option("--out", gen.out_dir, "output directory");

  ReconstructOptions rec;
  auto* cmd_rec = app.add_subcommand("reconstruct", "reconstruct a floorplan from a scene");
  cmd_rec->add_option("scene", rec.scene_path, "scene JSON path")->required();
  cmd_rec->add_option("--votes", rec.votes, "'oracle' or a votes JSON path");
  cmd_rec->add_option("--noise-sigma", rec.noise_sigma, "oracle vote noise std (m)");
  cmd_rec->add_option("--outlier-frac", rec.outlier_frac, "oracle outlier vote fraction");
  cmd_rec->add_option("--seed", rec.seed, "RNG seed");
  cmd_rec->add_option("--eps-room", rec.eps_room, "DBSCAN eps for room votes (m)");
  cmd_rec->add_option("--eps-wall", rec.eps_wall, "DBSCAN eps for wall votes (m)");
  cmd_rec->add_option("--threads", rec.threads, "worker threads");
  cmd_rec->add_option("--out", rec.out, "output floorplan JSON");
  cmd_rec->add_option("--svg", rec.svg, "also render an SVG to this path");

  EvalOptions ev;
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a prediction against ground truth");
  cmd_eval->add_option("gt", ev.gt_path, "ground truth (scene or floorplan JSON)");
  cmd_eval->add_option("pred", ev.pred_path, "predicted floorplan JSON");
  cmd_eval->add_option("--out", ev.out, "report JSON path");
  cmd_eval->add_option("--batch", ev.batch_manifest, "scene manifest for batch mode");
  cmd_eval->add_option("--pred-dir", ev.pred_dir, "directory of <scene>.plan.json files");
  cmd_eval->add_option("--csv", ev.csv, "batch CSV output path");
  cmd_eval->add_option("--grid", ev.grid, "evaluation grid size");

  std::string render_plan, render_out = "floorplan.svg";
  auto* cmd_render = app.add_subcommand("render", "render a floorplan to SVG");
  cmd_render->add_option("plan", render_plan, "floorplan JSON path")->required();
  cmd_render->add_option("--out", render_out, "output SVG path");

  int bench_threads = 8;
  auto* cmd_bench = app.add_subcommand("bench", "runtime benchmarks");
  cmd_bench->add_option("--threads", bench_threads, "thread count for the scaling run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_rec->parsed()) return run_reconstruct(rec);
    if (cmd_eval->parsed()) return run_eval(ev);
    if (cmd_render->parsed()) return run_render(render_plan, render_out);
    if (cmd_bench->parsed()) return run_bench(bench_threads);
  } catch (const SceneParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const VoteMismatch& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const BothEmpty& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitEmpty;
  } catch (const Error& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitOk;
}
