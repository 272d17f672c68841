#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gencam/image.hpp"
#include "gencam/version.hpp"

namespace fs = std::filesystem;
using namespace gencam;

namespace {

int run_cli(const std::string& args, const std::string& stdout_to = "",
            const std::string& env_prefix = "") {
    std::string cmd = env_prefix + std::string(GENCAM_CLI_PATH) + " " + args;
    if (!stdout_to.empty()) cmd += " > " + stdout_to;
    cmd += " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<unsigned char> slurp_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("gencam_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_gradient_pano(const fs::path& path, int height) {
    Image img(2 * height, height);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < 2 * height; ++c) {
            img.pixel(r, c)[0] = static_cast<std::uint8_t>(c % 256);
            img.pixel(r, c)[1] = static_cast<std::uint8_t>(r % 256);
            img.pixel(r, c)[2] = static_cast<std::uint8_t>((c + r) % 256);
        }
    save_png(img, path.string());
}

}  // namespace

TEST_CASE("version output carries the reference-config hash") {
    const fs::path dir = temp_dir("version");
    const std::string out = (dir / "v.txt").string();
    CHECK(run_cli("--version", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find(kVersion) != std::string::npos);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016lx",
                  static_cast<unsigned long>(fnv1a64(kDefaultConfigJson)));
    CHECK(text.find(hash) != std::string::npos);
}

TEST_CASE("checked-in reference config matches the embedded defaults") {
    CHECK(slurp(GENCAM_CONFIG_PATH) == std::string(kDefaultConfigJson));
}

TEST_CASE("exit codes: usage errors are 2, domain errors are 1") {
    CHECK(run_cli("no-such-subcommand") == 2);
    CHECK(run_cli("fit") == 2);                       // missing required flag
    CHECK(run_cli("fit --reference pinhole") == 1);   // unknown model name
    CHECK(run_cli("undistort --image missing.png --camera missing.json --out x.png") == 1);
}

TEST_CASE("compare-models emits the Table-style CSV with a zero diagonal") {
    const fs::path dir = temp_dir("cmp");
    const std::string out = (dir / "table.csv").string();
    CHECK(run_cli("compare-models --steps 2000 --fit-steps 501 --out " + out) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "model,STG,EQD,ESA,ORT");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    REQUIRE(rows.size() == 5);  // four models + the generic-fit row
    for (int i = 0; i < 4; ++i) {
        REQUIRE(rows[i].size() == 5);
        CHECK(std::stod(rows[i][i + 1]) == 0.0);
        for (int j = 0; j < 4; ++j) CHECK(rows[i][j + 1] == rows[j][i + 1]);
    }
    CHECK(rows[4][0] == "Generic");
}

TEST_CASE("derive-weights emits normalized weights as JSON") {
    const fs::path dir = temp_dir("weights");
    const std::string out = (dir / "w.json").string();
    CHECK(run_cli("derive-weights --grid-points 101 --samples 10000 --seed 0 --out " + out +
                  " --landscape-csv " + (dir / "l.csv").string()) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    const double sum = j["w_theta"].get<double>() + j["w_psi"].get<double>() +
                       j["w_f"].get<double>() + j["w_k1"].get<double>();
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(j["s_f"].get<double>() > 0.0);

    std::ifstream csv(dir / "l.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "normalized_value,loss_theta,loss_psi,loss_f,loss_k1");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 101);
}

TEST_CASE("landscape subcommand writes one curve") {
    const fs::path dir = temp_dir("landscape");
    const std::string out = (dir / "f.csv").string();
    CHECK(run_cli("landscape --param f --grid-points 21 --samples 2000 --out " + out) == 0);
    std::ifstream csv(out);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "normalized_value,loss");
    CHECK(run_cli("landscape --param bogus --out " + out) == 1);
}

TEST_CASE("gen-dataset is deterministic and drives undistort/recover/evaluate") {
    const fs::path dir = temp_dir("dataset");
    const fs::path pano_dir = dir / "panos";
    fs::create_directories(pano_dir);
    write_gradient_pano(pano_dir / "p0.png", 128);
    write_gradient_pano(pano_dir / "p1.png", 160);

    const fs::path out_a = dir / "a";
    const fs::path out_b = dir / "b";
    const std::string common = "gen-dataset --pano-dir " + pano_dir.string() +
                               " --count 3 --split train --seed 0 --out-dir ";
    REQUIRE(run_cli(common + out_a.string()) == 0);
    REQUIRE(run_cli(common + out_b.string()) == 0);

    for (const char* name : {"patch_000000.png", "patch_000001.png", "patch_000002.png",
                             "patch_000000.json", "manifest.csv"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(out_a / name));
        CHECK(slurp_bytes(out_a / name) == slurp_bytes(out_b / name));
    }

    // undistort + recover on the first patch
    const std::string img0 = (out_a / "patch_000000.png").string();
    const std::string cam0 = (out_a / "patch_000000.json").string();
    const std::string und = (dir / "und.png").string();
    const std::string rec = (dir / "rec.png").string();
    REQUIRE(run_cli("undistort --image " + img0 + " --camera " + cam0 + " --fov 70 --out " + und) == 0);
    REQUIRE(run_cli("recover --image " + img0 + " --camera " + cam0 + " --fov 70 --out " + rec) == 0);
    const Image u = load_png(und);
    CHECK(u.width == 224);
    CHECK(u.height == 224);

    // evaluate with predictions equal to the ground truth sidecars
    const fs::path pred = dir / "pred";
    fs::create_directories(pred);
    for (int i = 0; i < 3; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "patch_%06d.json", i);
        fs::copy_file(out_a / name, pred / name);
    }
    const std::string report = (dir / "report.csv").string();
    REQUIRE(run_cli("evaluate --manifest " + (out_a / "manifest.csv").string() + " --pred-dir " +
                    pred.string() + " --out " + report) == 0);
    std::ifstream rep(report);
    std::string header, row;
    std::getline(rep, header);
    std::getline(rep, row);
    CHECK(header ==
          "mean_abs_tilt_deg,mean_abs_roll_deg,mean_abs_f_mm,mean_abs_k1,repe_px,psnr_db,ssim");
    CHECK(row.substr(0, 25) == "0.00,0.00,0.00,0.00,0.00,");

    // missing predictions surface as a domain error
    fs::remove(pred / "patch_000002.json");
    CHECK(run_cli("evaluate --manifest " + (out_a / "manifest.csv").string() + " --pred-dir " +
                  pred.string() + " --out " + report) == 1);
}

TEST_CASE("scalar and SIMD kernel backends produce identical artifacts") {
    const fs::path dir = temp_dir("backends");
    const fs::path pano_dir = dir / "panos";
    fs::create_directories(pano_dir);
    write_gradient_pano(pano_dir / "p0.png", 128);

    const std::string common = "gen-dataset --pano-dir " + pano_dir.string() +
                               " --count 2 --split test --seed 9 --out-dir ";
    REQUIRE(run_cli(common + (dir / "scalar").string(), "", "GENCAM_KERNEL=scalar ") == 0);
    REQUIRE(run_cli(common + (dir / "simd").string(), "", "GENCAM_KERNEL=avx2 ") == 0);
    for (const char* name : {"patch_000000.png", "patch_000001.png", "manifest.csv"}) {
        CAPTURE(name);
        CHECK(slurp_bytes(dir / "scalar" / name) == slurp_bytes(dir / "simd" / name));
    }

    const std::string cam = (dir / "scalar" / "patch_000000.json").string();
    const std::string img = (dir / "scalar" / "patch_000000.png").string();
    REQUIRE(run_cli("recover --image " + img + " --camera " + cam + " --fov 75 --out " +
                        (dir / "rec_scalar.png").string(),
                    "", "GENCAM_KERNEL=scalar ") == 0);
    REQUIRE(run_cli("recover --image " + img + " --camera " + cam + " --fov 75 --out " +
                        (dir / "rec_simd.png").string(),
                    "", "GENCAM_KERNEL=avx2 ") == 0);
    CHECK(slurp_bytes(dir / "rec_scalar.png") == slurp_bytes(dir / "rec_simd.png"));
}
