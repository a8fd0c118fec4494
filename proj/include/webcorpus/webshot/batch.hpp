#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "webcorpus/collector/collector.hpp"
#include "webcorpus/webshot/capture.hpp"
#include "webcorpus/webshot/naming.hpp"

namespace webcorpus {

struct WebshotMeta {
  std::string name;
  std::int64_t img_bytes = 0;  // size of the file on disk
  int img_width = 0;
  int img_height = 0;

  bool operator==(const WebshotMeta&) const = default;
};

// Last sequence number used per (technique, category, country) group.
class SequenceBook {
 public:
  // Reserves and returns the next number for the group.
  int next(Technique technique, int category_id, std::string_view country);
  int last(Technique technique, int category_id, std::string_view country) const;
  // Makes sure later numbers in the name's group come after it.
  void observe(const WebshotName& name);

 private:
  using Key = std::tuple<Technique, int, std::string>;
  std::map<Key, int> last_;
};

// Builds a book from the webshots already stored under `root`, so a resumed
// run continues numbering instead of overwriting.
SequenceBook scan_sequences(const std::filesystem::path& root);

// <root>/<CategoryLabel>/<name>
std::filesystem::path webshot_path(const std::filesystem::path& root, const WebshotName& name);

struct ShotOutcome {
  std::optional<WebshotMeta> meta;
  std::optional<CaptureFailure> failure;
};

using EndpointFactory = std::function<std::unique_ptr<CaptureEndpoint>()>;

// Captures every record using up to `sessions` endpoints in parallel. Returns
// one outcome per record, in input order. Sequence numbers go to successes
// only, assigned in input order. Throws Error(kBackendUnavailable) if no
// endpoint could be created.
std::vector<ShotOutcome> capture_batch(std::span<const UrlRecord> records,
                                       const std::filesystem::path& out_root, SequenceBook& seqs,
                                       const EndpointFactory& make_endpoint, int sessions = 2);

}  // namespace webcorpus
