#include "flowgen/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "flowgen/augment.hpp"
#include "flowgen/degrade.hpp"
#include "flowgen/error.hpp"
#include "flowgen/raster.hpp"
#include "flowgen/rng.hpp"
#include "flowgen/scene.hpp"
#include "flowgen/version.hpp"

namespace flowgen {

std::string_view tool_version() noexcept { return kFlowgenVersion; }

Sample generate_sample(const GenConfig& config, std::uint64_t index, const std::vector<Texture>* photo_pool) {
  const std::uint64_t seed = sample_seed(config.seed, index);
  const SceneSpec scene = sample_scene_seeded(config, seed, photo_pool);
  RenderedPair r = render_pair(scene, config.supersample);

  Rng aug_rng = Rng(seed).fork("augment");
  AugmentedSample a = augment_sample(r.frame1, r.frame2, r.flow, r.occ, config.augment, config.augment_ranges,
                                     config.augment_interp, aug_rng);
  apply_profile(a.frame1, a.frame2, config.camera);
  return {std::move(a.frame1), std::move(a.frame2), std::move(a.flow), std::move(a.occ), std::move(a.valid)};
}

BoolMap persisted_occlusion(const Sample& s) {
  BoolMap out(s.occ.width(), s.occ.height());
  for (int y = 0; y < s.occ.height(); ++y) {
    for (int x = 0; x < s.occ.width(); ++x) out.set(x, y, s.occ.get(x, y) || !s.valid.get(x, y));
  }
  return out;
}

std::vector<Texture> load_pool_for(const GenConfig& config) {
  if (config.texture != TextureFamily::Photo) return {};
  return load_photo_pool(config.photo_dir);
}

DatasetManifest make_manifest(const GenConfig& config, std::string samples, std::string created) {
  DatasetManifest m;
  m.config_text = canonical_text(config);
  m.config_hash = config_hash(config);
  m.tool_version = std::string(tool_version());
  m.master_seed = config.seed;
  m.samples = std::move(samples);
  m.seed_rule = std::string(kSeedRule);
  m.created = std::move(created);
  return m;
}

namespace {

/// Runs `work(index)` for every index of [begin, end) on `threads` workers.
/// The first exception stops the remaining work and is rethrown.
template <typename Work>
void parallel_for(std::uint64_t begin, std::uint64_t end, int threads, Work work) {
  std::atomic<std::uint64_t> next{begin};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::uint64_t i = next.fetch_add(1);
      if (i >= end) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  const int n = std::max(1, threads);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n - 1));
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

GenerationStats run_generation(const GenConfig& config, const GenerationOptions& opt) {
  config.validate();
  if (opt.end < opt.begin) throw Error(ErrorCode::InvalidArgument, "sample range end precedes its start");
  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, opt.out_dir.string() + ": " + ec.message());

  const std::vector<Texture> pool = load_pool_for(config);
  const auto start = std::chrono::steady_clock::now();
  write_manifest(opt.out_dir,
                 make_manifest(config, std::to_string(opt.begin) + " " + std::to_string(opt.end), opt.created));

  std::atomic<std::uint64_t> generated{0};
  std::atomic<std::uint64_t> skipped{0};
  std::mutex progress_mutex;
  std::uint64_t done = 0;
  const std::uint64_t total = opt.end - opt.begin;
  parallel_for(opt.begin, opt.end, opt.threads, [&](std::uint64_t i) {
    if (!opt.overwrite && sample_complete(opt.out_dir, i)) {
      ++skipped;
    } else {
      const Sample s = generate_sample(config, i, &pool);
      write_sample(opt.out_dir, i, s.frame1, s.frame2, s.flow, persisted_occlusion(s));
      ++generated;
    }
    if (opt.progress) {
      std::lock_guard lock(progress_mutex);
      opt.progress(++done, total);
    }
  });

  GenerationStats stats;
  stats.generated = generated.load();
  stats.skipped = skipped.load();
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

std::uint64_t run_streaming(const GenConfig& config, std::uint64_t begin, std::optional<std::uint64_t> end,
                            int threads, std::ostream& out) {
  config.validate();
  const std::vector<Texture> pool = load_pool_for(config);
  const int n = std::max(1, threads);
  // Workers may run at most `window` records ahead of the writer.
  const std::uint64_t window = 2 * static_cast<std::uint64_t>(n);

  std::mutex m;
  std::condition_variable cv;
  std::map<std::uint64_t, std::string> ready;
  std::uint64_t next_claim = begin;
  std::uint64_t next_write = begin;
  bool stop = false;
  std::exception_ptr error;

  auto finished = [&](std::uint64_t i) { return end.has_value() && i >= *end; };

  auto worker = [&] {
    for (;;) {
      std::uint64_t i = 0;
      {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return stop || finished(next_claim) || next_claim < next_write + window; });
        if (stop || finished(next_claim)) return;
        i = next_claim++;
      }
      std::string record;
      try {
        const Sample s = generate_sample(config, i, &pool);
        record = encode_sample_record(i, s.frame1, s.frame2, s.flow, persisted_occlusion(s));
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
        stop = true;
        cv.notify_all();
        return;
      }
      std::lock_guard lock(m);
      ready.emplace(i, std::move(record));
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool_threads;
  for (int t = 0; t < n; ++t) pool_threads.emplace_back(worker);

  std::uint64_t written = 0;
  for (;;) {
    std::string record;
    {
      std::unique_lock lock(m);
      cv.wait(lock, [&] { return stop || finished(next_write) || ready.count(next_write) > 0; });
      if (stop || finished(next_write)) break;
      record = std::move(ready[next_write]);
      ready.erase(next_write);
    }
    out.write(record.data(), static_cast<std::streamsize>(record.size()));
    out.flush();
    std::lock_guard lock(m);
    if (!out) {
      stop = true;
      cv.notify_all();
      break;
    }
    ++next_write;
    ++written;
    cv.notify_all();
  }
  {
    std::lock_guard lock(m);
    stop = true;
    cv.notify_all();
  }
  for (auto& th : pool_threads) th.join();
  if (error) std::rethrow_exception(error);
  return written;
}

}  // namespace flowgen
