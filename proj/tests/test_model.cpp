#include <doctest.h>

#include <cmath>
#include <set>
#include <utility>

#include "facegraph/model.hpp"
#include "facegraph/rng.hpp"

using namespace facegraph;

TEST_CASE("normalize_embedding scales to unit norm") {
  // [3,4,0,0] has norm 5.
  Embedding e{{3.0, 4.0, 0.0, 0.0}};
  Embedding n = normalize_embedding(e);
  CHECK(n.values[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(n.values[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(n.values[2] == 0.0);
  CHECK(n.values[3] == 0.0);
  CHECK(l2_norm(n) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("normalize_embedding leaves unit vectors unchanged") {
  Embedding e{{1.0, 0.0, 0.0}};
  CHECK(normalize_embedding(e) == e);
}

TEST_CASE("normalize_embedding rejects the zero vector") {
  Embedding e{{0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(normalize_embedding(e), ZeroVectorError);
}

TEST_CASE("normalize_embedding is idempotent") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Embedding e;
    const std::size_t dim = 1 + rng.bounded(64);
    for (std::size_t k = 0; k < dim; ++k) {
      e.values.push_back(rng.uniform(-10.0, 10.0));
    }
    if (l2_norm(e) == 0.0) continue;
    const Embedding once = normalize_embedding(e);
    const Embedding twice = normalize_embedding(once);
    REQUIRE(once.dim() == twice.dim());
    for (std::size_t k = 0; k < once.dim(); ++k) {
      CHECK(std::abs(once.values[k] - twice.values[k]) <= 1e-6);
    }
  }
}

namespace {

FaceRecord make_record(std::uint32_t frame, std::uint32_t face) {
  FaceRecord rec;
  rec.video_id = "v";
  rec.frame_index = frame;
  rec.face_index = face;
  rec.bbox = BBox{0.0, 0.0, 1.0, 1.0};
  rec.detector_confidence = 0.9;
  return rec;
}

}  // namespace

TEST_CASE("VideoGroup counts distinct frames with detections") {
  // Frames {0,0,1,3,3,3} hold detections in 3 distinct frames.
  std::vector<FaceRecord> records;
  records.push_back(make_record(3, 0));
  records.push_back(make_record(0, 0));
  records.push_back(make_record(3, 1));
  records.push_back(make_record(1, 0));
  records.push_back(make_record(0, 1));
  records.push_back(make_record(3, 2));
  VideoGroup group = VideoGroup::from_records("v", records);
  CHECK(group.n_f == 3);
  REQUIRE(group.records.size() == 6);
  for (std::size_t i = 1; i < group.records.size(); ++i) {
    CHECK(group.records[i - 1].key() < group.records[i].key());
  }
}

TEST_CASE("VideoGroup rejects duplicate identity triples") {
  std::vector<FaceRecord> records{make_record(0, 0), make_record(0, 0)};
  CHECK_THROWS_AS(VideoGroup::from_records("v", records),
                  DuplicateRecordError);
}

TEST_CASE("VideoGroup n_f stays within [1, record count]") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.bounded(40);
    std::vector<FaceRecord> records;
    std::set<std::pair<std::uint32_t, std::uint32_t>> used;
    while (records.size() < n) {
      const auto frame = static_cast<std::uint32_t>(rng.bounded(12));
      const auto face = static_cast<std::uint32_t>(rng.bounded(4));
      if (used.insert({frame, face}).second) {
        records.push_back(make_record(frame, face));
      }
    }
    VideoGroup group = VideoGroup::from_records("v", std::move(records));
    CHECK(group.n_f >= 1);
    CHECK(group.n_f <= group.records.size());
  }
}

TEST_CASE("size fractions parse and print") {
  CHECK(parse_size_fraction("1/2") == SizeFraction{1, 2});
  CHECK(parse_size_fraction("3/4") == SizeFraction{3, 4});
  CHECK(parse_size_fraction("1") == SizeFraction{1, 1});
  CHECK(to_string(SizeFraction{3, 4}) == "3/4");
  CHECK_THROWS_AS(parse_size_fraction("0/2"), Error);
  CHECK_THROWS_AS(parse_size_fraction("5/4"), Error);
  CHECK_THROWS_AS(parse_size_fraction("abc"), Error);
}

TEST_CASE("aggregation schemes parse and print") {
  for (auto scheme : {AggregationScheme::avg, AggregationScheme::median,
                      AggregationScheme::max, AggregationScheme::face}) {
    CHECK(parse_scheme(to_string(scheme)) == scheme);
  }
  CHECK_THROWS_AS(parse_scheme("mean"), Error);
}
