// gencam: generic fisheye camera-model toolkit CLI.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gencam/camera.hpp"
#include "gencam/image.hpp"
#include "gencam/kernels.hpp"
#include "gencam/metrics.hpp"
#include "gencam/model_zoo.hpp"
#include "gencam/ngbl.hpp"
#include "gencam/remap.hpp"
#include "gencam/rng.hpp"
#include "gencam/synth.hpp"
#include "gencam/version.hpp"

namespace fs = std::filesystem;
using namespace gencam;

namespace {

void log_event(const std::string& name, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream os;
    os << "event=" << name;
    for (const auto& [k, v] : kv) os << " " << k << "=" << v;
    std::cerr << os.str() << "\n";
}

std::string fixed2(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

ProjectionModel reference_by_name(const std::string& name, double focal) {
    if (name == "stg" || name == "stereographic") return ProjectionModel::stereographic(focal);
    if (name == "eqd" || name == "equidistance") return ProjectionModel::equidistance(focal);
    if (name == "esa" || name == "equisolid") return ProjectionModel::equisolid_angle(focal);
    if (name == "ort" || name == "orthogonal") return ProjectionModel::orthogonal(focal);
    throw std::invalid_argument("unknown reference model: " + name);
}

LossParam param_by_name(const std::string& name) {
    if (name == "theta" || name == "tilt") return LossParam::Tilt;
    if (name == "psi" || name == "roll") return LossParam::Roll;
    if (name == "f" || name == "focal") return LossParam::Focal;
    if (name == "k1") return LossParam::K1;
    throw std::invalid_argument("unknown landscape parameter: " + name);
}

// --- compare-models ---------------------------------------------------------

std::string comparison_table_csv(double focal, double pitch, int steps, int fit_steps) {
    const std::vector<std::pair<std::string, ProjectionModel>> models = {
        {"STG", ProjectionModel::stereographic(focal)},
        {"EQD", ProjectionModel::equidistance(focal)},
        {"ESA", ProjectionModel::equisolid_angle(focal)},
        {"ORT", ProjectionModel::orthogonal(focal)},
    };
    std::ostringstream os;
    os << "model";
    for (const auto& [name, m] : models) os << "," << name;
    os << "\n";
    for (const auto& [row_name, row_model] : models) {
        os << row_name;
        for (const auto& [col_name, col_model] : models) {
            const double err =
                compare_models(row_model, col_model, pitch, steps).mean_abs_error_px;
            os << "," << fixed2(err);
        }
        os << "\n";
    }
    os << "Generic";
    for (const auto& [name, m] : models) os << "," << fixed2(fit_generic(m, fit_steps).residual_px);
    os << "\n";
    return os.str();
}

// --- dataset ----------------------------------------------------------------

constexpr std::uint64_t kStreamPanoPick = 3;

std::vector<fs::path> list_panoramas(const std::string& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw std::runtime_error("no .png panoramas found in " + dir);
    return paths;
}

void run_gen_dataset(const std::string& pano_dir, const std::string& out_dir, int count,
                     const std::string& split_name, std::uint64_t seed, int threads) {
    const Split split = split_from_string(split_name);
    const auto pano_paths = list_panoramas(pano_dir);
    fs::create_directories(out_dir);

    std::vector<Panorama> panos;
    panos.reserve(pano_paths.size());
    for (const auto& p : pano_paths) panos.emplace_back(load_png(p.string()));

    std::ostringstream manifest;
    manifest << "id,image,params,pano,pan_deg,tilt_deg,roll_deg,focal_mm,k1,max_incident_deg,"
                "image_width_px,image_height_px\n";
    for (int i = 0; i < count; ++i) {
        const std::size_t pano_idx = rng::at(seed, kStreamPanoPick, i) % panos.size();
        const PatchRecord rec = make_patch(panos[pano_idx], split, seed, i, threads);
        const CameraParameters& params = rec.params;

        char id[32];
        std::snprintf(id, sizeof(id), "patch_%06d", i);
        const std::string png_name = std::string(id) + ".png";
        const std::string json_name = std::string(id) + ".json";
        save_png(rec.image, (fs::path(out_dir) / png_name).string());
        save_camera_json(params, (fs::path(out_dir) / json_name).string());

        manifest << id << "," << png_name << "," << json_name << ","
                 << pano_paths[pano_idx].filename().string() << "," << params.pan_deg << ","
                 << params.tilt_deg << "," << params.roll_deg << "," << params.focal_mm << ","
                 << params.k1 << "," << params.max_incident_deg << "," << params.image_width_px
                 << "," << params.image_height_px << "\n";
        if ((i + 1) % 50 == 0 || i + 1 == count)
            log_event("gen-dataset", {{"written", std::to_string(i + 1)}});
    }
    write_text((fs::path(out_dir) / "manifest.csv").string(), manifest.str());
}

// --- evaluate ---------------------------------------------------------------

std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty manifest: " + manifest_path);
    std::vector<ManifestEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string id, image, params_file;
        std::getline(row, id, ',');
        std::getline(row, image, ',');
        std::getline(row, params_file, ',');
        entries.push_back({id, load_camera_json((base / params_file).string())});
    }
    if (entries.empty()) throw std::runtime_error("manifest has no entries: " + manifest_path);
    return entries;
}

void run_evaluate(const std::string& manifest_path, const std::string& pred_dir,
                  const std::string& out_path, const std::string& images_a,
                  const std::string& images_b, int threads) {
    const auto manifest = read_manifest(manifest_path);
    std::map<std::string, CameraParameters> predictions;
    for (const auto& entry : manifest) {
        const fs::path pred_path = fs::path(pred_dir) / (entry.id + ".json");
        if (fs::exists(pred_path)) predictions[entry.id] = load_camera_json(pred_path.string());
    }

    std::map<std::string, std::pair<Image, Image>> image_pairs;
    if (!images_a.empty() && !images_b.empty()) {
        for (const auto& entry : manifest) {
            const fs::path pa = fs::path(images_a) / (entry.id + ".png");
            const fs::path pb = fs::path(images_b) / (entry.id + ".png");
            if (fs::exists(pa) && fs::exists(pb))
                image_pairs.emplace(entry.id,
                                    std::make_pair(load_png(pa.string()), load_png(pb.string())));
        }
    }

    const EvaluationReport rep = evaluate_manifest(
        manifest, predictions, image_pairs.empty() ? nullptr : &image_pairs, threads);

    std::ostringstream os;
    os << "mean_abs_tilt_deg,mean_abs_roll_deg,mean_abs_f_mm,mean_abs_k1,repe_px,psnr_db,ssim\n";
    os << fixed2(rep.mean_abs_tilt_deg) << "," << fixed2(rep.mean_abs_roll_deg) << ","
       << fixed2(rep.mean_abs_f_mm) << "," << fixed2(rep.mean_abs_k1) << ","
       << fixed2(rep.repe_px) << ",";
    os << (rep.psnr_db ? fixed2(*rep.psnr_db) : "") << ",";
    os << (rep.ssim_value ? fixed2(*rep.ssim_value) : "") << "\n";
    write_text(out_path, os.str());
    log_event("evaluate", {{"entries", std::to_string(rep.entry_count)},
                           {"repe_px", fixed2(rep.repe_px)}});
}

std::string weights_json(const LossWeights& w) {
    nlohmann::ordered_json j;
    j["w_theta"] = w.w_theta;
    j["w_psi"] = w.w_psi;
    j["w_f"] = w.w_f;
    j["w_k1"] = w.w_k1;
    j["s_theta"] = w.s_theta;
    j["s_psi"] = w.s_psi;
    j["s_f"] = w.s_f;
    j["s_k1"] = w.s_k1;
    return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generic fisheye camera model toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --threads appear after the subcommand too

    char version_line[128];
    std::snprintf(version_line, sizeof(version_line), "gencam %s (reference-config fnv1a64=%016" PRIx64 ")",
                  kVersion, fnv1a64(kDefaultConfigJson));
    app.set_version_flag("--version", std::string(version_line));

    int threads = 1;
    app.add_option("--threads", threads, "cap on worker threads (results are independent of it)");

    // compare-models
    auto* cmp = app.add_subcommand("compare-models", "pairwise projection-law comparison table");
    double cmp_focal = 10.5, cmp_pitch = 24.0 / 224.0;
    int cmp_steps = 100000, cmp_fit_steps = 4001;
    std::string cmp_out;
    cmp->add_option("--focal", cmp_focal, "assumed focal length [mm]");
    cmp->add_option("--pitch", cmp_pitch, "pixel pitch [mm/px]");
    cmp->add_option("--steps", cmp_steps, "quadrature steps");
    cmp->add_option("--fit-steps", cmp_fit_steps, "quadrature steps for the generic-fit row");
    cmp->add_option("--out", cmp_out, "output CSV path (stdout when omitted)");

    // fit
    auto* fit = app.add_subcommand("fit", "fit the generic cubic model to a reference law");
    std::string fit_ref = "esa";
    double fit_focal = 10.5;
    int fit_steps = 4001;
    fit->add_option("--reference", fit_ref, "stg|eqd|esa|ort")->required();
    fit->add_option("--focal", fit_focal, "reference focal length [mm]");
    fit->add_option("--steps", fit_steps, "quadrature steps");

    // derive-weights
    auto* dw = app.add_subcommand("derive-weights", "harmonic joint-loss weights");
    int dw_grid = 201, dw_samples = 20000;
    std::uint64_t dw_seed = 0;
    std::string dw_out, dw_landscape_csv;
    dw->add_option("--grid-points", dw_grid, "landscape grid points");
    dw->add_option("--samples", dw_samples, "bearings per grid point");
    dw->add_option("--seed", dw_seed, "RNG seed");
    dw->add_option("--out", dw_out, "output JSON path (stdout when omitted)");
    dw->add_option("--landscape-csv", dw_landscape_csv, "also dump all four landscapes as CSV");

    // landscape
    auto* ls = app.add_subcommand("landscape", "loss landscape of one parameter");
    std::string ls_param;
    int ls_grid = 201, ls_samples = 20000;
    std::uint64_t ls_seed = 0;
    std::string ls_out;
    ls->add_option("--param", ls_param, "theta|psi|f|k1")->required();
    ls->add_option("--grid-points", ls_grid, "landscape grid points");
    ls->add_option("--samples", ls_samples, "bearings per grid point");
    ls->add_option("--seed", ls_seed, "RNG seed");
    ls->add_option("--out", ls_out, "output CSV path (stdout when omitted)");

    // gen-dataset
    auto* gd = app.add_subcommand("gen-dataset", "synthesize fisheye patches from panoramas");
    std::string gd_pano_dir, gd_out_dir, gd_split = "train";
    int gd_count = 100;
    std::uint64_t gd_seed = 0;
    gd->add_option("--pano-dir", gd_pano_dir, "directory of equirectangular .png panoramas")->required();
    gd->add_option("--out-dir", gd_out_dir, "output directory")->required();
    gd->add_option("--count", gd_count, "number of patches");
    gd->add_option("--split", gd_split, "train|test");
    gd->add_option("--seed", gd_seed, "RNG seed");

    // undistort / recover
    auto add_remap_flags = [](CLI::App* sub, std::string& image, std::string& camera,
                              std::string& out, PerspectiveSpec& spec) {
        sub->add_option("--image", image, "input fisheye PNG")->required();
        sub->add_option("--camera", camera, "camera parameters JSON")->required();
        sub->add_option("--out", out, "output PNG")->required();
        sub->add_option("--fov", spec.hfov_deg, "horizontal FOV of the perspective output [deg]");
        sub->add_option("--out-width", spec.width, "output width [px]");
        sub->add_option("--out-height", spec.height, "output height [px]");
    };
    auto* ud = app.add_subcommand("undistort", "remap a fisheye image to a perspective view");
    std::string ud_image, ud_camera, ud_out;
    PerspectiveSpec ud_spec;
    add_remap_flags(ud, ud_image, ud_camera, ud_out, ud_spec);

    auto* rc = app.add_subcommand("recover", "undistort and level the horizon (removes tilt/roll)");
    std::string rc_image, rc_camera, rc_out;
    PerspectiveSpec rc_spec;
    add_remap_flags(rc, rc_image, rc_camera, rc_out, rc_spec);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "score predictions against a manifest");
    std::string ev_manifest, ev_pred_dir, ev_out = "report.csv", ev_images_a, ev_images_b;
    ev->add_option("--manifest", ev_manifest, "manifest.csv from gen-dataset")->required();
    ev->add_option("--pred-dir", ev_pred_dir, "directory of <id>.json predictions")->required();
    ev->add_option("--out", ev_out, "output report CSV");
    ev->add_option("--images-a", ev_images_a, "reference images <id>.png for PSNR/SSIM");
    ev->add_option("--images-b", ev_images_b, "comparison images <id>.png for PSNR/SSIM");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        log_event("start", {{"kernel", kernels::backend_name(kernels::active())},
                            {"threads", std::to_string(threads)}});
        if (cmp->parsed()) {
            const std::string table =
                comparison_table_csv(cmp_focal, cmp_pitch, cmp_steps, cmp_fit_steps);
            if (cmp_out.empty())
                std::cout << table;
            else
                write_text(cmp_out, table);
        } else if (fit->parsed()) {
            const FitResult r = fit_generic(reference_by_name(fit_ref, fit_focal), fit_steps);
            nlohmann::ordered_json j;
            j["reference"] = projection_kind_name(r.reference.kind);
            j["fitted_f_mm"] = r.fitted_f_mm;
            j["fitted_k1"] = r.fitted_k1;
            j["residual_px"] = r.residual_px;
            std::cout << j.dump(2) << "\n";
        } else if (dw->parsed()) {
            const LossWeights w = derive_weights(dw_grid, dw_samples, dw_seed, threads);
            const std::string text = weights_json(w);
            if (dw_out.empty())
                std::cout << text;
            else
                write_text(dw_out, text);
            if (!dw_landscape_csv.empty()) {
                std::ostringstream os;
                os << "normalized_value,loss_theta,loss_psi,loss_f,loss_k1\n";
                const LossParam params[4] = {LossParam::Tilt, LossParam::Roll, LossParam::Focal,
                                             LossParam::K1};
                std::vector<std::vector<LandscapePoint>> curves;
                for (const LossParam p : params)
                    curves.push_back(landscape(p, dw_grid, dw_samples, dw_seed, threads));
                for (int i = 0; i < dw_grid; ++i) {
                    os << curves[0][i].normalized_value;
                    for (int p = 0; p < 4; ++p) os << "," << curves[p][i].loss;
                    os << "\n";
                }
                write_text(dw_landscape_csv, os.str());
            }
        } else if (ls->parsed()) {
            const auto curve = landscape(param_by_name(ls_param), ls_grid, ls_samples, ls_seed, threads);
            std::ostringstream os;
            os << "normalized_value,loss\n";
            for (const auto& pt : curve) os << pt.normalized_value << "," << pt.loss << "\n";
            if (ls_out.empty())
                std::cout << os.str();
            else
                write_text(ls_out, os.str());
        } else if (gd->parsed()) {
            run_gen_dataset(gd_pano_dir, gd_out_dir, gd_count, gd_split, gd_seed, threads);
        } else if (ud->parsed()) {
            const Image img = load_png(ud_image);
            const CameraParameters cam = load_camera_json(ud_camera);
            save_png(undistort(img, cam, ud_spec, threads), ud_out);
            log_event("undistort", {{"out", ud_out}});
        } else if (rc->parsed()) {
            const Image img = load_png(rc_image);
            const CameraParameters cam = load_camera_json(rc_camera);
            save_png(recover(img, cam, rc_spec, threads), rc_out);
            log_event("recover", {{"out", rc_out}});
        } else if (ev->parsed()) {
            run_evaluate(ev_manifest, ev_pred_dir, ev_out, ev_images_a, ev_images_b, threads);
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
