#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <set>
#include <string>

#include <unistd.h>

#include "fake_webdriver.hpp"
#include "page_server.hpp"
#include "webcorpus/csv.hpp"
#include "webcorpus/error.hpp"
#include "webcorpus/webshot/batch.hpp"
#include "webcorpus/webshot/image.hpp"

namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace webcorpus {
namespace {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("webcorpus_webshot_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// --- naming -----------------------------------------------------------------

TEST(WebshotName, PaperExample) {
  EXPECT_EQ(make_name(Technique::kBrowsing, 2, "Netherlands", 791), "B2Netherlands_791.jpg");
  auto parsed = parse_name("B2Netherlands_791.jpg");
  ASSERT_TRUE(parsed);
  EXPECT_EQ(parsed->technique, Technique::kBrowsing);
  EXPECT_EQ(parsed->category_id, 2);
  EXPECT_EQ(parsed->country, "Netherlands");
  EXPECT_EQ(parsed->seq, 791);
}

TEST(WebshotName, SearchingFirst) {
  EXPECT_EQ(make_name(Technique::kSearching, 1, "Spain", 1), "S1Spain_1.jpg");
}

TEST(WebshotName, SpacesRemoved) {
  EXPECT_EQ(make_name(Technique::kSearching, 5, "New Zealand", 12), "S5NewZealand_12.jpg");
}

TEST(WebshotName, RejectsInvalidInputs) {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParse;
  };
  EXPECT_EQ(code([] { make_name(Technique::kBrowsing, 1, "Spain", 0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([] { make_name(Technique::kBrowsing, 7, "Spain", 1); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([] { make_name(Technique::kBrowsing, 1, "  ", 1); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([] { make_name(Technique::kBrowsing, 1, "a/b", 1); }),
            ErrorCode::kInvalidArgument);
}

TEST(WebshotName, ParseRejectsOffGrammar) {
  for (const char* bad : {"", "B2Netherlands_791.png", "X2Netherlands_1.jpg", "B7Spain_1.jpg",
                          "B0Spain_1.jpg", "B2_1.jpg", "B2Spain_0.jpg", "B2Spain_01.jpg",
                          "B2Spain_.jpg", "B2Spain_1a.jpg", "B2Spain1.jpg", "b2Spain_1.jpg",
                          "B2Spain_99999999999.jpg"}) {
    EXPECT_FALSE(parse_name(bad)) << bad;
  }
  auto underscores = parse_name("S3Bosnia_and_Herzegovina_4.jpg");
  ASSERT_TRUE(underscores);
  EXPECT_EQ(underscores->country, "Bosnia_and_Herzegovina");
  EXPECT_EQ(underscores->seq, 4);
}

WebshotName random_name(std::mt19937_64& rng) {
  static const std::string alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-.()'";
  static const std::string utf8[] = {"\xC3\xA9", "\xC3\xB1", "\xC3\xBC", "\xE6\x97\xA5"};
  WebshotName n;
  n.technique = rng() % 2 ? Technique::kBrowsing : Technique::kSearching;
  n.category_id = 1 + static_cast<int>(rng() % 6);
  int len = 1 + static_cast<int>(rng() % 24);
  for (int i = 0; i < len; ++i) {
    if (rng() % 10 == 0) {
      n.country += utf8[rng() % std::size(utf8)];
    } else {
      n.country += alphabet[rng() % alphabet.size()];
    }
  }
  switch (rng() % 3) {
    case 0: n.seq = 1 + static_cast<int>(rng() % 10); break;
    case 1: n.seq = 1 + static_cast<int>(rng() % 100000); break;
    default: n.seq = 1 + static_cast<int>(rng() % 2147483647); break;
  }
  return n;
}

TEST(WebshotName, RoundTripProperty) {
  std::mt19937_64 rng(20201);
  for (int i = 0; i < 10000; ++i) {
    WebshotName n = random_name(rng);
    auto parsed = parse_name(make_name(n));
    ASSERT_TRUE(parsed) << make_name(n);
    EXPECT_EQ(*parsed, n) << make_name(n);
  }
}

// --- images -----------------------------------------------------------------

TEST(Image, PngRoundTrip) {
  RgbImage img = RgbImage::solid(17, 9, 10, 200, 30);
  img.pixels[5] = 77;
  RgbImage back = decode_png(encode_png(img));
  EXPECT_EQ(back.width, 17);
  EXPECT_EQ(back.height, 9);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Image, JpegSizeIsReadFromHeader) {
  std::string jpg = encode_jpeg(RgbImage::solid(992, 1234, 255, 255, 255), 90);
  ImageSize size = jpeg_size(jpg);
  EXPECT_EQ(size.width, 992);
  EXPECT_EQ(size.height, 1234);
  RgbImage back = decode_jpeg(jpg);
  EXPECT_EQ(back.width, 992);
  EXPECT_NEAR(back.pixels[0], 255, 2);
}

TEST(Image, MalformedInputs) {
  EXPECT_THROW(decode_png("not a png at all"), Error);
  std::string png = encode_png(RgbImage::solid(4, 4, 0, 0, 0));
  EXPECT_THROW(decode_png(png.substr(0, png.size() / 2)), Error);
  EXPECT_THROW(jpeg_size("garbage!"), Error);
  EXPECT_THROW(encode_jpeg(RgbImage{}, 90), Error);
  EXPECT_THROW(encode_jpeg(RgbImage::solid(2, 2, 0, 0, 0), 0), Error);
}

// --- capture through the fake driver ---------------------------------------

std::string stacked_blocks(int blocks, int block_px) {
  std::string html = "<html><body style=\"margin:0\">";
  for (int i = 0; i < blocks; ++i) {
    html += "<div style=\"height: " + std::to_string(block_px) + "px; background:#" +
            std::to_string(100 + i % 800) + "\">block</div>\n";
  }
  return html + "</body></html>";
}

class CaptureTest : public ::testing::Test {
 protected:
  void SetUp() override {
    pages_.page("/short", "<html><body><p>tiny</p></body></html>");
    pages_.page("/tall", stacked_blocks(50, 100));  // 5000 px
    pages_.page("/huge", stacked_blocks(30, 100));  // 3000 px
    pages_.slow("/slow", 1200ms, "<p>late</p>");
    pages_.start();
  }

  CaptureOptions options() const {
    CaptureOptions o;
    o.timeout = 5s;
    return o;
  }

  testing::PageServer pages_;
  testing::FakeWebDriver driver_;
};

TEST_F(CaptureTest, ShortPageUsesViewport) {
  WebDriverSession session(driver_.endpoint(), options());
  auto r = session.capture(pages_.url("/short"));
  ASSERT_TRUE(std::holds_alternative<Capture>(r)) << std::get<CaptureFailure>(r).message;
  const auto& shot = std::get<Capture>(r);
  EXPECT_EQ(shot.width, 992);
  EXPECT_EQ(shot.height, 744);
  EXPECT_EQ(jpeg_size(shot.jpeg).height, 744);
}

TEST_F(CaptureTest, TallPageIsFullHeight) {
  WebDriverSession session(driver_.endpoint(), options());
  auto r = session.capture(pages_.url("/tall"));
  ASSERT_TRUE(std::holds_alternative<Capture>(r));
  const auto& shot = std::get<Capture>(r);
  EXPECT_EQ(shot.width, 992);
  EXPECT_GT(shot.height, 744);
  EXPECT_NEAR(shot.height, 5000, 5000 * 0.02);
}

TEST_F(CaptureTest, HeightCap) {
  CaptureOptions o = options();
  o.max_height = 2000;
  WebDriverSession session(driver_.endpoint(), o);
  auto r = session.capture(pages_.url("/huge"));
  ASSERT_TRUE(std::holds_alternative<Capture>(r));
  EXPECT_EQ(std::get<Capture>(r).height, 2000);
}

TEST_F(CaptureTest, UnreachableUrlIsNavigationError) {
  WebDriverSession session(driver_.endpoint(), options());
  auto r = session.capture("http://127.0.0.1:" + std::to_string(testing::closed_port()) + "/");
  ASSERT_TRUE(std::holds_alternative<CaptureFailure>(r));
  EXPECT_EQ(std::get<CaptureFailure>(r).kind, CaptureFailure::Kind::kNavigationError);
  // The session is still usable afterwards.
  EXPECT_TRUE(std::holds_alternative<Capture>(session.capture(pages_.url("/short"))));
}

TEST_F(CaptureTest, PageLoadTimeout) {
  CaptureOptions o = options();
  o.timeout = 300ms;
  WebDriverSession session(driver_.endpoint(), o);
  auto r = session.capture(pages_.url("/slow"));
  ASSERT_TRUE(std::holds_alternative<CaptureFailure>(r));
  EXPECT_EQ(std::get<CaptureFailure>(r).kind, CaptureFailure::Kind::kTimeout);
}

TEST_F(CaptureTest, MalformedScreenshotIsProtocolError) {
  driver_.set_fault(testing::FakeWebDriver::Fault::kGarbageScreenshot);
  WebDriverSession session(driver_.endpoint(), options());
  auto r = session.capture(pages_.url("/short"));
  ASSERT_TRUE(std::holds_alternative<CaptureFailure>(r));
  EXPECT_EQ(std::get<CaptureFailure>(r).kind, CaptureFailure::Kind::kProtocolError);
}

TEST_F(CaptureTest, SessionLifecycle) {
  {
    WebDriverSession session(driver_.endpoint(), options());
    EXPECT_FALSE(session.session_id().empty());
    EXPECT_EQ(driver_.sessions_created(), 1);
  }
  EXPECT_EQ(driver_.sessions_deleted(), 1);

  driver_.set_fault(testing::FakeWebDriver::Fault::kNoSessionId);
  try {
    WebDriverSession bad(driver_.endpoint(), options());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  try {
    WebDriverSession down("http://127.0.0.1:" + std::to_string(testing::closed_port()),
                          options());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

// --- batches ----------------------------------------------------------------

UrlRecord rec(const std::string& url, Technique t = Technique::kBrowsing, int cat = 3,
              const std::string& country = "Spain") {
  return {url, country, Continent::kEurope, cat, t};
}

// Scripted endpoint: URLs containing "fail" fail, everything else yields a
// tiny image.
class ScriptedEndpoint : public CaptureEndpoint {
 public:
  CaptureResult capture(const std::string& url) override {
    if (url.find("fail") != std::string::npos) {
      return CaptureFailure{CaptureFailure::Kind::kNavigationError, "scripted"};
    }
    Capture c;
    c.jpeg = encode_jpeg(RgbImage::solid(992, 744 + static_cast<int>(url.size()), 9, 9, 9), 90);
    c.width = 992;
    c.height = 744 + static_cast<int>(url.size());
    return c;
  }
};

EndpointFactory scripted() {
  return [] { return std::make_unique<ScriptedEndpoint>(); };
}

std::vector<std::string> names_of(const std::vector<ShotOutcome>& outcomes) {
  std::vector<std::string> out;
  for (const auto& o : outcomes) out.push_back(o.meta ? o.meta->name : "-");
  return out;
}

TEST(CaptureBatch, SequentialNumbersPerGroup) {
  TempDir dir;
  SequenceBook seqs;
  std::vector<UrlRecord> records{rec("https://a/"), rec("https://b/"), rec("https://c/")};
  auto out = capture_batch(records, dir.path(), seqs, scripted());
  EXPECT_EQ(names_of(out), (std::vector<std::string>{"B3Spain_1.jpg", "B3Spain_2.jpg",
                                                     "B3Spain_3.jpg"}));
  for (const auto& o : out) {
    fs::path p = dir.path() / "Education" / o.meta->name;
    ASSERT_TRUE(fs::exists(p));
    EXPECT_EQ(o.meta->img_bytes, static_cast<std::int64_t>(fs::file_size(p)));
    EXPECT_EQ(jpeg_size(read_file(p)).height, o.meta->img_height);
  }
}

TEST(CaptureBatch, FailuresDoNotConsumeNumbers) {
  TempDir dir;
  SequenceBook seqs;
  std::vector<UrlRecord> records{rec("https://a/"), rec("https://fail/"), rec("https://c/")};
  auto out = capture_batch(records, dir.path(), seqs, scripted());
  EXPECT_EQ(names_of(out),
            (std::vector<std::string>{"B3Spain_1.jpg", "-", "B3Spain_2.jpg"}));
  ASSERT_TRUE(out[1].failure);
  EXPECT_EQ(out[1].failure->kind, CaptureFailure::Kind::kNavigationError);
}

TEST(CaptureBatch, EmptyInput) {
  TempDir dir;
  SequenceBook seqs;
  bool called = false;
  auto out = capture_batch({}, dir.path(), seqs, [&] {
    called = true;
    return std::make_unique<ScriptedEndpoint>();
  });
  EXPECT_TRUE(out.empty());
  EXPECT_FALSE(called);
}

TEST(CaptureBatch, GroupsAreIndependentAndResumable) {
  TempDir dir;
  SequenceBook seqs;
  std::vector<UrlRecord> records{
      rec("https://a/", Technique::kBrowsing, 3), rec("https://b/", Technique::kSearching, 3),
      rec("https://c/", Technique::kBrowsing, 1), rec("https://d/", Technique::kBrowsing, 3),
      rec("https://e/", Technique::kBrowsing, 3, "New Zealand")};
  auto out = capture_batch(records, dir.path(), seqs, scripted(), 3);
  EXPECT_EQ(names_of(out),
            (std::vector<std::string>{"B3Spain_1.jpg", "S3Spain_1.jpg",
                                      "B1Spain_1.jpg", "B3Spain_2.jpg", "B3NewZealand_1.jpg"}));

  SequenceBook resumed = scan_sequences(dir.path());
  EXPECT_EQ(resumed.last(Technique::kBrowsing, 3, "Spain"), 2);
  EXPECT_EQ(resumed.last(Technique::kBrowsing, 3, "New Zealand"), 1);
  std::vector<UrlRecord> more{rec("https://f/")};
  auto next = capture_batch(more, dir.path(), resumed, scripted());
  EXPECT_EQ(names_of(next), (std::vector<std::string>{"B3Spain_3.jpg"}));

  // A stale book never overwrites an existing file.
  SequenceBook stale;
  auto again = capture_batch(more, dir.path(), stale, scripted());
  EXPECT_EQ(names_of(again), (std::vector<std::string>{"B3Spain_4.jpg"}));
}

TEST(CaptureBatch, ParallelSessionsKeepInputOrderAndUniqueNames) {
  TempDir dir;
  std::mt19937 rng(4);
  std::vector<UrlRecord> records;
  for (int i = 0; i < 60; ++i) {
    std::string url = "https://h" + std::to_string(i) + (rng() % 5 == 0 ? "/fail" : "/ok");
    records.push_back(rec(url, rng() % 2 ? Technique::kBrowsing : Technique::kSearching,
                          1 + static_cast<int>(rng() % 2)));
  }
  SequenceBook serial_seqs;
  TempDir serial_dir;
  auto serial = capture_batch(records, serial_dir.path(), serial_seqs, scripted(), 1);
  SequenceBook seqs;
  auto parallel = capture_batch(records, dir.path(), seqs, scripted(), 4);
  EXPECT_EQ(names_of(serial), names_of(parallel));
  std::set<std::string> unique;
  for (const auto& o : parallel) {
    if (o.meta) {
      EXPECT_TRUE(unique.insert(o.meta->name).second);
    }
  }
}

TEST(CaptureBatch, NoSessionAvailable) {
  TempDir dir;
  SequenceBook seqs;
  std::vector<UrlRecord> records{rec("https://a/")};
  try {
    capture_batch(records, dir.path(), seqs,
                  []() -> std::unique_ptr<CaptureEndpoint> { throw std::runtime_error("down"); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

TEST_F(CaptureTest, BatchThroughWebDriver) {
  TempDir dir;
  SequenceBook seqs;
  std::vector<UrlRecord> records{rec(pages_.url("/short")), rec("http://127.0.0.1:1/"),
                                 rec(pages_.url("/tall"))};
  auto out = capture_batch(records, dir.path(), seqs, [&] {
    return std::make_unique<WebDriverSession>(driver_.endpoint(), options());
  });
  EXPECT_EQ(names_of(out), (std::vector<std::string>{"B3Spain_1.jpg", "-", "B3Spain_2.jpg"}));
  EXPECT_EQ(out[0].meta->img_width, 992);
  EXPECT_EQ(out[0].meta->img_height, 744);
  EXPECT_GT(out[2].meta->img_height, 744);
  EXPECT_EQ(driver_.sessions_created(), 2);
  EXPECT_EQ(driver_.sessions_deleted(), 2);
}

}  // namespace
}  // namespace webcorpus
