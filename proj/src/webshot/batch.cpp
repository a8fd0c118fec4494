#include "webcorpus/webshot/batch.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "webcorpus/csv.hpp"
#include "webcorpus/error.hpp"

namespace fs = std::filesystem;

namespace webcorpus {

int SequenceBook::next(Technique technique, int category_id, std::string_view country) {
  return ++last_[Key{technique, category_id, name_country_key(country)}];
}

int SequenceBook::last(Technique technique, int category_id, std::string_view country) const {
  auto it = last_.find(Key{technique, category_id, name_country_key(country)});
  return it == last_.end() ? 0 : it->second;
}

void SequenceBook::observe(const WebshotName& name) {
  int& slot = last_[Key{name.technique, name.category_id, name.country}];
  slot = std::max(slot, name.seq);
}

SequenceBook scan_sequences(const fs::path& root) {
  SequenceBook book;
  std::error_code ec;
  for (const auto& cat : categories()) {
    fs::path dir = root / std::string(cat.label);
    if (!fs::is_directory(dir, ec)) continue;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (!entry.is_regular_file(ec)) continue;
      if (auto name = parse_name(entry.path().filename().string())) book.observe(*name);
    }
  }
  return book;
}

fs::path webshot_path(const fs::path& root, const WebshotName& name) {
  return root / std::string(category(name.category_id).label) / make_name(name);
}

std::vector<ShotOutcome> capture_batch(std::span<const UrlRecord> records, const fs::path& out_root,
                                       SequenceBook& seqs, const EndpointFactory& make_endpoint,
                                       int sessions) {
  std::vector<ShotOutcome> outcomes(records.size());
  if (records.empty()) return outcomes;

  std::vector<std::unique_ptr<CaptureEndpoint>> endpoints;
  std::string first_error;
  int wanted = std::clamp<int>(sessions, 1, static_cast<int>(records.size()));
  for (int i = 0; i < wanted; ++i) {
    try {
      endpoints.push_back(make_endpoint());
    } catch (const std::exception& e) {
      spdlog::warn("capture session {} unavailable: {}", i, e.what());
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (endpoints.empty()) {
    throw Error(ErrorCode::kBackendUnavailable, "no capture session: " + first_error);
  }

  // Workers capture in any order; this thread commits strictly in input order
  // so sequence numbers follow the input.
  std::vector<std::optional<CaptureResult>> results(records.size());
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  auto work = [&](CaptureEndpoint& endpoint) {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      CaptureResult r;
      try {
        r = endpoint.capture(records[i].url);
      } catch (const std::exception& e) {
        r = CaptureFailure{CaptureFailure::Kind::kProtocolError, e.what()};
      }
      std::lock_guard lock(mu);
      results[i] = std::move(r);
      ready.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (auto& endpoint : endpoints) pool.emplace_back(work, std::ref(*endpoint));

  std::exception_ptr fatal;
  for (std::size_t i = 0; i < records.size(); ++i) {
    CaptureResult r;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return results[i].has_value(); });
      r = std::move(*results[i]);
      results[i].reset();
    }
    const UrlRecord& rec = records[i];
    if (auto* failure = std::get_if<CaptureFailure>(&r)) {
      spdlog::warn("capture {}: {} {}", rec.url, to_string(failure->kind), failure->message);
      outcomes[i].failure = *failure;
      continue;
    }
    auto& shot = std::get<Capture>(r);
    try {
      WebshotName name{rec.technique, rec.category_id, name_country_key(rec.country), 0};
      fs::path path;
      do {
        name.seq = seqs.next(rec.technique, rec.category_id, rec.country);
        path = webshot_path(out_root, name);
      } while (fs::exists(path));
      fs::create_directories(path.parent_path());
      write_file_atomic(path, shot.jpeg);
      outcomes[i].meta = WebshotMeta{path.filename().string(),
                                     static_cast<std::int64_t>(fs::file_size(path)), shot.width,
                                     shot.height};
      spdlog::info("capture {} -> {} ({}x{})", rec.url, outcomes[i].meta->name, shot.width,
                   shot.height);
    } catch (...) {
      fatal = std::current_exception();
      next = records.size();  // stop handing out work
      break;
    }
  }
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);
  return outcomes;
}

}  // namespace webcorpus
