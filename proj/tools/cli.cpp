#include "cli.hpp"

#include "neuroseg/error.hpp"
#include "neuroseg/io.hpp"
#include "neuroseg/mask_synthesis.hpp"
#include "neuroseg/metrics.hpp"
#include "neuroseg/postprocess.hpp"
#include "neuroseg/scene.hpp"
#include "neuroseg/tiling.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace neuroseg::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Connectivity parse_connectivity(int c) {
  if (c == 4) return Connectivity::four;
  if (c == 8) return Connectivity::eight;
  throw Error(ErrorCode::InvalidArgument, "--connectivity must be 4 or 8");
}

/// Runs job(i) for i in [0, n) on up to `workers` threads. The first failure
/// is rethrown after all threads finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& job) {
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (count == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(count, n); ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

/// Sorted stems of files with `ext` in `dir`.
std::vector<std::string> list_ids(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ext) ids.push_back(entry.path().stem().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

void require_file(const fs::path& p, const std::string& id) {
  if (!fs::is_regular_file(p)) throw Error(ErrorCode::MissingPair, "no " + p.string() + " for image " + id);
}

struct PipelineFlags {
  int se_radius = 10;
  double threshold = 0.5;
  int min_distance = 20;
  int connectivity = 8;
  int min_area = 20;

  void add_to(CLI::App& app) {
    app.add_option("--se-radius", se_radius, "Disk radius for erosion/dilation (px)")->capture_default_str();
    app.add_option("--threshold", threshold, "Neuron probability threshold")->capture_default_str();
    app.add_option("--min-distance", min_distance, "Minimum peak spacing for the distance scheme (px)")
        ->capture_default_str();
    app.add_option("--connectivity", connectivity, "Pixel connectivity, 4 or 8")->capture_default_str();
    app.add_option("--min-area", min_area, "Drop final objects smaller than this (px)")->capture_default_str();
  }

  PipelineConfig config() const {
    PipelineConfig c;
    c.se_radius = se_radius;
    c.ws_threshold = threshold;
    c.min_distance = min_distance;
    c.connectivity = parse_connectivity(connectivity);
    c.min_object_area = min_area;
    c.validate();
    return c;
  }
};

Scheme scheme_or_throw(const std::string& name) {
  const auto s = parse_scheme(name);
  if (!s) throw Error(ErrorCode::InvalidArgument, "unknown scheme \"" + name + "\"");
  return *s;
}

// ---------------------------------------------------------------- synthesize

struct SynthesizeArgs {
  std::string mask, points, out, id;
  int thickness = 4;
  int connectivity = 8;
};

int cmd_synthesize(const SynthesizeArgs& a, std::ostream& out, std::ostream& err) {
  const BinaryMask binary = io::read_mask(a.mask);
  const PointSet seeds = io::read_points(a.points, static_cast<int>(binary.cols()), static_cast<int>(binary.rows()));
  const SynthesizedMasks masks = synthesize(binary, seeds, a.thickness, parse_connectivity(a.connectivity));

  const std::string id = a.id.empty() ? fs::path(a.mask).stem().string() : a.id;
  fs::create_directories(a.out);
  const fs::path instances = fs::path(a.out) / (id + "_instances.png");
  const fs::path classes = fs::path(a.out) / (id + "_classes.png");
  io::write_label_map(instances, masks.instances);
  io::write_class_mask(classes, masks.classes);
  out << instances.string() << '\n' << classes.string() << '\n';

  for (const auto& p : masks.rejected_seeds) err << "warning: seed (" << p.x << "," << p.y << ") lies on background, skipped\n";
  return masks.rejected_seeds.empty() ? kExitOk : kExitWarnings;
}

// --------------------------------------------------------------- postprocess

struct PostprocessArgs {
  std::string input, tiles, tile_dir, out, scheme = "proposed";
  int workers = 1;
  PipelineFlags pipeline;
};

ProbabilityMap<double> load_tiled(const std::string& manifest_path, const std::string& tile_dir) {
  const io::TileManifest m = io::read_tile_manifest(manifest_path);
  std::vector<Tile<double>> tiles;
  for (const auto& [rect, path] : m.tiles) {
    const fs::path p = tile_dir.empty() ? path : fs::path(tile_dir) / path.filename();
    Tile<double> t{rect, io::read_probability_map(p)};
    if (t.prob.width() != rect.width || t.prob.height() != rect.height) {
      throw Error(ErrorCode::DimensionMismatch, p.string() + " does not match its tile rectangle");
    }
    tiles.push_back(std::move(t));
  }
  if (tiles.empty()) throw Error(ErrorCode::InvalidArgument, manifest_path + " lists no tiles");
  const int tw = tiles.front().rect.width;
  const int th = tiles.front().rect.height;
  const int limit = (std::min(tw, th) - 1) / 2;
  return stitch(tiles, weight_map(tw, th, std::min(m.overlap, limit)), m.width, m.height);
}

int cmd_postprocess(const PostprocessArgs& a, std::ostream& out, std::ostream& err) {
  const Scheme scheme = scheme_or_throw(a.scheme);
  const PipelineConfig cfg = a.pipeline.config();

  struct Job {
    std::string id;
    fs::path output;
    std::function<ProbabilityMap<double>()> load;
  };
  std::vector<Job> jobs;
  if (!a.tiles.empty()) {
    jobs.push_back({fs::path(a.tiles).stem().string(), a.out, [&] { return load_tiled(a.tiles, a.tile_dir); }});
  } else if (fs::is_directory(a.input)) {
    fs::create_directories(a.out);
    for (const auto& id : list_ids(a.input, ".png")) {
      const fs::path in = fs::path(a.input) / (id + ".png");
      jobs.push_back({id, fs::path(a.out) / (id + ".png"), [in] { return io::read_probability_map(in); }});
    }
    if (jobs.empty()) throw Error(ErrorCode::Io, a.input + " holds no PNG files");
  } else {
    const fs::path in = a.input;
    jobs.push_back({in.stem().string(), a.out, [in] { return io::read_probability_map(in); }});
  }

  std::vector<double> seconds(jobs.size());
  parallel_for(jobs.size(), a.workers, [&](std::size_t i) {
    const ProbabilityMap<double> pm = jobs[i].load();
    const auto t0 = std::chrono::steady_clock::now();
    const LabelMap labels = run_scheme(pm, scheme, cfg);
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::write_label_map(jobs[i].output, labels);
  });
  // Wall times vary run to run, so they go to the diagnostic stream.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    out << jobs[i].id << '\t' << jobs[i].output.string() << '\n';
    err << "time\t" << jobs[i].id << '\t' << to_string(scheme) << '\t' << fmt(seconds[i]) << "s\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ evaluate

struct ImageScores {
  double f1_det = 0, precision = 0, recall = 0, rce = 0, dice = 0, f1_seg = 0, aji = 0;
};

ImageScores score_image(const LabelMap& pred, const LabelMap& gt, const PointSet& centroids) {
  ImageScores s;
  const DetectionCounts det = match_detections(pred, centroids);
  const PrecisionRecall pr = precision_recall_f1(det);
  s.f1_det = pr.f1;
  s.precision = pr.precision;
  s.recall = pr.recall;
  s.rce = det.tp + det.fn > 0 ? rce(det) : std::nan("");
  s.dice = dice(foreground(pred), foreground(gt));
  s.f1_seg = f1_seg(pred, gt).f1;
  s.aji = (gt != 0).any() ? aji(pred, gt) : std::nan("");
  return s;
}

std::string mean_std(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values)
    if (!std::isnan(x)) v.push_back(x);
  if (v.empty()) return "nan";
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  return fmt(mean) + "±" + fmt(std::sqrt(var));
}

struct EvaluateArgs {
  std::string pred, gt, points, out;
  int workers = 1;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto ids = list_ids(a.gt, ".png");
  if (ids.empty()) throw Error(ErrorCode::Io, a.gt + " holds no ground-truth PNG files");
  for (const auto& id : list_ids(a.pred, ".png"))
    if (!std::binary_search(ids.begin(), ids.end(), id)) {
      throw Error(ErrorCode::MissingPair, "prediction " + id + " has no ground truth");
    }
  for (const auto& id : ids) {
    require_file(fs::path(a.pred) / (id + ".png"), id);
    require_file(fs::path(a.points) / (id + ".txt"), id);
  }

  std::vector<ImageScores> scores(ids.size());
  parallel_for(ids.size(), a.workers, [&](std::size_t i) {
    const LabelMap gt = io::read_label_map(fs::path(a.gt) / (ids[i] + ".png"));
    const LabelMap pred = io::read_label_map(fs::path(a.pred) / (ids[i] + ".png"));
    if (!same_shape(gt, pred)) throw Error(ErrorCode::DimensionMismatch, "prediction and ground truth differ for " + ids[i]);
    const PointSet pts =
        io::read_points(fs::path(a.points) / (ids[i] + ".txt"), static_cast<int>(gt.cols()), static_cast<int>(gt.rows()));
    scores[i] = score_image(pred, gt, pts);
  });

  std::ostringstream csv;
  csv << "image-id,F1-det,P,R,RCE,Dice,F1-seg,AJI\n";
  std::array<std::vector<double>, 7> columns;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const ImageScores& s = scores[i];
    const std::array<double, 7> row{s.f1_det, s.precision, s.recall, s.rce, s.dice, s.f1_seg, s.aji};
    csv << ids[i];
    for (std::size_t c = 0; c < row.size(); ++c) {
      csv << ',' << fmt(row[c]);
      columns[c].push_back(row[c]);
    }
    csv << '\n';
  }
  csv << "mean±std";
  for (const auto& col : columns) csv << ',' << mean_std(col);
  csv << '\n';
  io::write_text(a.out, csv.str());
  out << "evaluated " << ids.size() << " image(s) -> " << a.out << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- compare

struct CompareArgs {
  std::string probmaps, gt, manifest, out;
  int workers = 1;
  PipelineFlags pipeline;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const PipelineConfig cfg = a.pipeline.config();
  struct Item {
    std::string id;
    fs::path prob, gt;
  };
  std::vector<Item> items;
  if (!a.manifest.empty()) {
    for (const auto& e : io::read_manifest(a.manifest)) {
      if (!e.ground_truth) throw Error(ErrorCode::MissingPair, "manifest entry " + e.id + " has no ground truth");
      items.push_back({e.id, e.probability_map, *e.ground_truth});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.id < y.id; });
  } else {
    for (const auto& id : list_ids(a.probmaps, ".png")) {
      const fs::path gt = fs::path(a.gt) / (id + ".png");
      require_file(gt, id);
      items.push_back({id, fs::path(a.probmaps) / (id + ".png"), gt});
    }
  }
  if (items.empty()) throw Error(ErrorCode::Io, "no probability maps to compare");

  struct Result {
    double f1_seg = 0, aji = 0, seconds = 0;
  };
  std::vector<std::array<Result, kAllSchemes.size()>> results(items.size());
  parallel_for(items.size(), a.workers, [&](std::size_t i) {
    const ProbabilityMap<double> pm = io::read_probability_map(items[i].prob);
    const LabelMap gt = io::read_label_map(items[i].gt);
    if (gt.rows() != pm.height() || gt.cols() != pm.width()) {
      throw Error(ErrorCode::DimensionMismatch, "probability map and ground truth differ for " + items[i].id);
    }
    for (std::size_t s = 0; s < kAllSchemes.size(); ++s) {
      const auto t0 = std::chrono::steady_clock::now();
      const LabelMap labels = run_scheme(pm, kAllSchemes[s], cfg);
      results[i][s].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      results[i][s].f1_seg = f1_seg(labels, gt).f1;
      results[i][s].aji = (gt != 0).any() ? aji(labels, gt) : std::nan("");
    }
  });

  std::ostringstream csv, timing;
  csv << "image-id,scheme,F1-seg,AJI\n";
  timing << "image-id,scheme,seconds\n";
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t s = 0; s < kAllSchemes.size(); ++s) {
      const Result& r = results[i][s];
      csv << items[i].id << ',' << to_string(kAllSchemes[s]) << ',' << fmt(r.f1_seg) << ',' << fmt(r.aji) << '\n';
      timing << items[i].id << ',' << to_string(kAllSchemes[s]) << ',' << fmt(r.seconds) << '\n';
    }
  for (std::size_t s = 0; s < kAllSchemes.size(); ++s) {
    std::vector<double> f1, aj;
    for (const auto& r : results) {
      f1.push_back(r[s].f1_seg);
      aj.push_back(r[s].aji);
    }
    csv << "mean±std," << to_string(kAllSchemes[s]) << ',' << mean_std(f1) << ',' << mean_std(aj) << '\n';
  }
  io::write_text(a.out, csv.str());
  fs::path timing_path = a.out;
  timing_path.replace_filename(timing_path.stem().string() + "_timing.csv");
  io::write_text(timing_path, timing.str());
  out << "compared " << items.size() << " image(s) -> " << a.out << ", timings -> " << timing_path.string() << '\n';
  return kExitOk;
}

// -------------------------------------------------------------------- genfix

struct GenfixArgs {
  std::string out, prefix = "scene";
  std::uint64_t seed = 0;
  int images = 1;
  int workers = 1;
  SceneSpec spec;
};

std::uint64_t image_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 of (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int cmd_genfix(const GenfixArgs& a, std::ostream& out) {
  a.spec.validate();
  if (a.images < 1) throw Error(ErrorCode::InvalidArgument, "--images must be >= 1");
  const fs::path root = a.out;
  for (const char* sub : {"prob", "gt", "points", "classes"}) fs::create_directories(root / sub);

  std::vector<std::string> ids(a.images);
  std::vector<std::size_t> counts(a.images);
  for (int i = 0; i < a.images; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "_%03d", i);
    ids[i] = a.prefix + buf;
  }
  parallel_for(ids.size(), a.workers, [&](std::size_t i) {
    const Scene s = generate_scene(a.spec, image_seed(a.seed, i));
    io::write_probability_map(root / "prob" / (ids[i] + ".png"), s.prob);
    io::write_label_map(root / "gt" / (ids[i] + ".png"), s.labels);
    io::write_points(root / "points" / (ids[i] + ".txt"), s.centroids);
    io::write_class_mask(root / "classes" / (ids[i] + ".png"), s.classes);
    counts[i] = s.disks.size();
  });

  std::vector<io::ManifestEntry> entries;
  for (const auto& id : ids)
    entries.push_back({id, fs::path("prob") / (id + ".png"), fs::path("points") / (id + ".txt"),
                       fs::path("gt") / (id + ".png")});
  io::write_manifest(root / "manifest.tsv", entries);
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << '\t' << counts[i] << " instances\n";
  if (std::any_of(counts.begin(), counts.end(), [&](std::size_t c) { return c < static_cast<std::size_t>(a.spec.count); })) {
    return kExitWarnings;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- tile-plan

struct TilePlanArgs {
  int width = 0, height = 0;
  int patch = kDefaultPatchSize, overlap = kDefaultOverlap;
  std::string image, out;
};

int cmd_tile_plan(const TilePlanArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<io::PngImage> image;
  int width = a.width;
  int height = a.height;
  if (!a.image.empty()) {
    image = io::read_png(a.image);
    width = image->width;
    height = image->height;
  }
  const TileGrid grid = plan_tiles(width, height, a.patch, a.overlap);
  if (grid.patch_shrunk) err << "note: patch larger than the image, shrunk to " << grid.patch_width << "x" << grid.patch_height << '\n';

  io::TileManifest manifest{width, height, grid.overlap, {}};
  for (std::size_t k = 0; k < grid.tiles.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "tile_%03zu_%03zu.png", k / grid.tiles_x, k % grid.tiles_x);
    manifest.tiles.emplace_back(grid.tiles[k], name);
  }
  if (!a.out.empty()) {
    if (!image) throw Error(ErrorCode::InvalidArgument, "--out needs --image to crop from");
    fs::create_directories(a.out);
    for (const auto& [rect, name] : manifest.tiles) io::write_png(fs::path(a.out) / name, io::crop(*image, rect));
    io::write_tile_manifest(fs::path(a.out) / "tiles.tsv", manifest);
  }
  out << "canvas\t" << width << '\t' << height << "\toverlap\t" << grid.overlap << '\n';
  for (const auto& [r, name] : manifest.tiles)
    out << r.x0 << '\t' << r.y0 << '\t' << r.width << '\t' << r.height << '\t' << name.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Instance segmentation post-processing, mask synthesis and evaluation"};
  app.require_subcommand(1);

  SynthesizeArgs syn;
  auto* synthesize = app.add_subcommand("synthesize", "Three-class masks from a binary mask and centroids");
  synthesize->add_option("--mask", syn.mask, "Binary foreground PNG")->required();
  synthesize->add_option("--points", syn.points, "Centroid list (x,y per line)")->required();
  synthesize->add_option("--out", syn.out, "Output directory")->required();
  synthesize->add_option("--id", syn.id, "Output file prefix (default: mask file stem)");
  synthesize->add_option("--thickness", syn.thickness, "Contour band thickness (px)")->capture_default_str();
  synthesize->add_option("--connectivity", syn.connectivity, "Growth connectivity, 4 or 8")->capture_default_str();

  PostprocessArgs post;
  auto* postprocess = app.add_subcommand("postprocess", "Probability map(s) to instance labels");
  auto* post_input = postprocess->add_option("--input", post.input, "Probability PNG or directory of them");
  auto* post_tiles = postprocess->add_option("--tiles", post.tiles, "Tile manifest of per-tile probability PNGs");
  post_input->excludes(post_tiles);
  postprocess->add_option("--tile-dir", post.tile_dir, "Directory holding the tiles named in --tiles");
  postprocess->add_option("--out", post.out, "Output label PNG, or directory for directory input")->required();
  postprocess->add_option("--scheme", post.scheme, "proposed | baseline | distance | contour-strip")
      ->capture_default_str();
  postprocess->add_option("--workers", post.workers, "Images processed concurrently")->capture_default_str();
  post.pipeline.add_to(*postprocess);

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted label maps against ground truth");
  evaluate->add_option("--pred", eval.pred, "Directory of predicted label PNGs")->required();
  evaluate->add_option("--gt", eval.gt, "Directory of ground-truth label PNGs")->required();
  evaluate->add_option("--points", eval.points, "Directory of centroid lists <id>.txt")->required();
  evaluate->add_option("--out", eval.out, "Output CSV")->required();
  evaluate->add_option("--workers", eval.workers, "Images processed concurrently")->capture_default_str();

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Run every post-processing scheme and score F1-seg / AJI");
  auto* cmp_prob = compare->add_option("--probmaps", cmp.probmaps, "Directory of probability PNGs");
  compare->add_option("--gt", cmp.gt, "Directory of ground-truth label PNGs")->needs(cmp_prob);
  auto* cmp_manifest = compare->add_option("--manifest", cmp.manifest, "Manifest listing images instead of directories");
  cmp_prob->excludes(cmp_manifest);
  compare->add_option("--out", cmp.out, "Output CSV (timings go to <stem>_timing.csv)")->required();
  compare->add_option("--workers", cmp.workers, "Images processed concurrently")->capture_default_str();
  cmp.pipeline.add_to(*compare);

  GenfixArgs gen;
  auto* genfix = app.add_subcommand("genfix", "Generate synthetic scenes with ground truth and probability maps");
  genfix->add_option("--out", gen.out, "Output directory")->required();
  genfix->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  genfix->add_option("--images", gen.images, "Number of scenes")->capture_default_str();
  genfix->add_option("--prefix", gen.prefix, "Image id prefix")->capture_default_str();
  genfix->add_option("--workers", gen.workers, "Scenes generated concurrently")->capture_default_str();
  genfix->add_option("--width", gen.spec.width)->capture_default_str();
  genfix->add_option("--height", gen.spec.height)->capture_default_str();
  genfix->add_option("--count", gen.spec.count, "Disks per scene")->capture_default_str();
  genfix->add_option("--radius-min", gen.spec.radius_min)->capture_default_str();
  genfix->add_option("--radius-max", gen.spec.radius_max)->capture_default_str();
  genfix->add_option("--touching", gen.spec.touching_fraction, "Fraction of disks placed overlapping another")
      ->capture_default_str();
  genfix->add_option("--min-center-ratio", gen.spec.min_center_ratio, "Closest overlap as a fraction of the radius sum")
      ->capture_default_str();
  genfix->add_option("--ridge-coverage-min", gen.spec.ridge_coverage_min,
                     "Lower bound of the rendered share of each touching interface")
      ->capture_default_str();
  genfix->add_option("--blur", gen.spec.blur_sigma, "Gaussian sigma applied to the probability map")->capture_default_str();
  genfix->add_option("--noise", gen.spec.noise, "Uniform noise amplitude")->capture_default_str();
  genfix->add_option("--thickness", gen.spec.contour_thickness, "Contour band thickness (px)")->capture_default_str();

  TilePlanArgs tp;
  auto* tile_plan = app.add_subcommand("tile-plan", "Plan (and optionally cut) overlapping patches");
  tile_plan->add_option("--width", tp.width);
  tile_plan->add_option("--height", tp.height);
  tile_plan->add_option("--image", tp.image, "PNG to take the size from (and to crop with --out)");
  tile_plan->add_option("--patch-size", tp.patch)->capture_default_str();
  tile_plan->add_option("--overlap", tp.overlap)->capture_default_str();
  tile_plan->add_option("--out", tp.out, "Write cropped tiles and tiles.tsv here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (*synthesize) return cmd_synthesize(syn, out, err);
    if (*postprocess) {
      if (!parse_scheme(post.scheme)) {
        err << "error: unknown scheme \"" << post.scheme << "\"\n\n" << postprocess->help();
        return kExitError;
      }
      if (post.input.empty() && post.tiles.empty()) {
        err << "error: postprocess needs --input or --tiles\n\n" << postprocess->help();
        return kExitError;
      }
      return cmd_postprocess(post, out, err);
    }
    if (*evaluate) return cmd_evaluate(eval, out);
    if (*compare) {
      if (cmp.manifest.empty() && (cmp.probmaps.empty() || cmp.gt.empty())) {
        err << "error: compare needs --probmaps and --gt, or --manifest\n\n" << compare->help();
        return kExitError;
      }
      return cmd_compare(cmp, out);
    }
    if (*genfix) return cmd_genfix(gen, out);
    if (*tile_plan) {
      if (tp.image.empty() && (tp.width < 1 || tp.height < 1)) {
        err << "error: tile-plan needs --width and --height, or --image\n\n" << tile_plan->help();
        return kExitError;
      }
      return cmd_tile_plan(tp, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace neuroseg::cli
