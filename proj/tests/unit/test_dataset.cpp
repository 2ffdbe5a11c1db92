#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "chromasim/dataset.hpp"
#include "chromasim/png_io.hpp"
#include "chromasim/sha256.hpp"
#include "cli.hpp"
#include "oracles.hpp"

using namespace chromasim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("chromasim_test_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

dataset::DatasetConfig tiny(int train, int val, int test) {
    dataset::DatasetConfig c;
    c.train = train, c.val = val, c.test = test;
    c.image_size = 128;
    c.master_seed = 5;
    return c;
}

}  // namespace

TEST(Sha256, KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Png, RoundTrip) {
    TempDir t("png");
    InstanceMask m(7, 5, 0);
    m(3, 2) = 513;
    m(6, 4) = 65535;
    io::write_mask(t.path / "m.png", m);
    EXPECT_EQ(io::read_mask(t.path / "m.png"), m);
    ScalarField f(7, 5, 0.25);
    io::write_gray16(t.path / "g.png", f);
    const auto back = io::read_image(t.path / "g.png");
    EXPECT_NEAR(back.channel(0)(0, 0), 0.25, 1.0 / 65535);
}

TEST(Config, SplitsNamesAndValidation) {
    const auto c = tiny(2, 1, 1);
    EXPECT_EQ(dataset::split_of(c, 0), "train");
    EXPECT_EQ(dataset::split_of(c, 1), "train");
    EXPECT_EQ(dataset::split_of(c, 2), "val");
    EXPECT_EQ(dataset::split_of(c, 3), "test");
    EXPECT_EQ(dataset::image_name(7), "img_00007.png");
    EXPECT_EQ(dataset::mask_name(7), "mask_00007.png");
    EXPECT_EQ(dataset::meta_name(7), "meta_00007.json");
    dataset::DatasetConfig d;
    EXPECT_EQ(d.total(), 1600);
    EXPECT_THROW(dataset::apply_config(d, nlohmann::json{{"bogus", 1}}), InputError);
    dataset::apply_config(d, nlohmann::json{{"counts", {{"train", 3}, {"val", 0}, {"test", 1}}}, {"seed", 9}});
    EXPECT_EQ(d.total(), 4);
    EXPECT_EQ(d.master_seed, 9u);
}

TEST(Generate, LayoutVerifyAndTamper) {
    TempDir t("gen");
    const auto res = dataset::generate_dataset(tiny(2, 1, 1), t.path);
    ASSERT_TRUE(res.failures.empty());
    EXPECT_EQ(res.generated, 4);
    const auto dir = t.path / "cspws";
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    EXPECT_TRUE(fs::exists(dir / "train" / "img_00000.png"));
    EXPECT_TRUE(fs::exists(dir / "train" / "img_00001.png"));
    EXPECT_TRUE(fs::exists(dir / "val" / "mask_00002.png"));
    EXPECT_TRUE(fs::exists(dir / "test" / "meta_00003.json"));
    EXPECT_TRUE(dataset::verify_manifest(dir).empty());

    // One flipped byte: exactly that path.
    const auto victim = dir / "val" / "img_00002.png";
    auto bytes = oracle::file_bytes(victim);
    bytes[bytes.size() / 2] ^= 0x01;
    std::ofstream(victim, std::ios::binary) << bytes;
    auto issues = dataset::verify_manifest(dir);
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0].path, "val/img_00002.png");
    EXPECT_EQ(issues[0].problem, "sha256 mismatch");

    fs::remove(dir / "test" / "mask_00003.png");
    issues = dataset::verify_manifest(dir);
    ASSERT_EQ(issues.size(), 2u);
    bool missing = false;
    for (const auto& i : issues) missing |= i.path == "test/mask_00003.png" && i.problem == "missing";
    EXPECT_TRUE(missing);

    fs::remove(dir / "manifest.json");
    EXPECT_THROW(dataset::verify_manifest(dir), InputError);
}

TEST(Generate, RegenerationIsByteIdentical) {
    TempDir a("rega"), b("regb");
    dataset::generate_dataset(tiny(2, 1, 0), a.path);
    dataset::GenerateOptions o;
    o.workers = 3;
    dataset::generate_dataset(tiny(2, 1, 0), b.path, o);
    EXPECT_EQ(oracle::file_bytes(a.path / "cspws" / "manifest.json"), oracle::file_bytes(b.path / "cspws" / "manifest.json"));
}

TEST(Extract, RowsMatchNucleiAndRepeat) {
    TempDir t("ext");
    dataset::generate_dataset(tiny(3, 0, 0), t.path);
    const auto dir = t.path / "cspws";
    const auto r1 = dataset::extract_dataset(dir, 1);
    const auto r2 = dataset::extract_dataset(dir, 2);
    std::size_t nuclei = 0;
    for (const auto& rec : dataset::list_images(dir)) nuclei += dataset::load_sample(dir, rec).layout.nuclei.size();
    EXPECT_EQ(r1.rows.size(), nuclei);
    ASSERT_EQ(r1.rows.size(), r2.rows.size());
    for (std::size_t i = 0; i < r1.rows.size(); ++i)
        ASSERT_EQ(biomarker_csv_row(r1.rows[i]), biomarker_csv_row(r2.rows[i]));
}

TEST(ReadCsv, MissingClassColumn) {
    TempDir t("csv");
    std::ofstream(t.path / "b.csv") << "image_id,nucleus_id,area_px2\nx,1,3\n";
    EXPECT_THROW(dataset::read_biomarker_csv(t.path / "b.csv"), InputError);
}

TEST(Cli, ExitCodesAndOutputs) {
    TempDir t("cli");
    const auto root = (t.path / "data").string();
    EXPECT_EQ(cli::run({"--seed", "3", "--out", root, "generate", "--counts", "2,1,1", "--image-size", "128"}), 0);
    EXPECT_EQ(cli::run({"verify", root}), 0);
    const auto csv = (t.path / "bio.csv").string();
    EXPECT_EQ(cli::run({"--out", csv, "extract", "--data", root}), 0);
    EXPECT_EQ(cli::run({"--seed", "1", "--out", (t.path / "rep").string(), "report", "--in", csv, "--resamples", "200"}), 0);
    EXPECT_TRUE(fs::exists(t.path / "rep" / "population_report.csv"));
    EXPECT_EQ(cli::run({"--out", (t.path / "sens.csv").string(), "sensitivity", "--data", root, "--offsets", "1,2"}), 0);
    const auto sens = oracle::file_bytes(t.path / "sens.csv");
    EXPECT_EQ(std::count(sens.begin(), sens.end(), '\n'), 6);  // header, control, +-1, +-2

    const auto eval_out = (t.path / "eval.csv").string();
    const auto masks = (fs::path(root) / "cspws" / "train").string();
    EXPECT_EQ(cli::run({"--out", eval_out, "evaluate", "--pred", masks, "--truth", masks, "--resamples", "100"}), 0);

    EXPECT_EQ(cli::run({"verify", (t.path / "nowhere").string()}), 1);
    EXPECT_EQ(cli::run({"generate", "--counts", "1,2"}), 1);
    EXPECT_EQ(cli::run({"--bogus-flag"}), 1);
    std::ofstream(t.path / "bad.json") << "{\"nope\": 1}";
    EXPECT_EQ(cli::run({"--config", (t.path / "bad.json").string(), "generate"}), 1);

    fs::remove(fs::path(root) / "cspws" / "val" / "img_00002.png");
    EXPECT_EQ(cli::run({"verify", root}), 2);
}
