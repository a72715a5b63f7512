// contam-bench: command-line front end for the contamination experiments.

#include "contam/bounds/bounds.hpp"
#include "contam/classifiers/classifier.hpp"
#include "contam/classifiers/evaluate.hpp"
#include "contam/contamination/contaminate.hpp"
#include "contam/core/error.hpp"
#include "contam/harness/config.hpp"
#include "contam/harness/experiment.hpp"
#include "contam/harness/misreg_experiment.hpp"
#include "contam/harness/report.hpp"
#include "contam/raster/boundary.hpp"
#include "contam/raster/resample.hpp"
#include "contam/raster/scene_io.hpp"
#include "contam/synthgen/mixture.hpp"
#include "contam/synthgen/pattern.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace contam;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

data::LabelColumn label_column(const std::string& text) {
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return static_cast<std::size_t>(std::stoull(text));
    }
    return text;
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("bad number '" + item + "' in list");
        }
    }
    return out;
}

// Class weights from a JSON array or a one-line comma list.
std::vector<double> read_weights(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') return json::parse(text).get<std::vector<double>>();
    std::replace(text.begin(), text.end(), '\n', ',');
    text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }), text.end());
    while (!text.empty() && text.back() == ',') text.pop_back();
    return parse_list(text);
}

struct Options {
    std::size_t workers = 1;

    // run
    fs::path config, out;

    // gen
    std::string gen_kind;
    std::size_t n = 1000, p = 10, width = 596, height = 529, bands = 10;
    std::uint64_t seed = 0, seed_a = 11;
    std::string mu;
    int classes = 5;
    double patchiness = 1.0, noise_sigma = 0.1;
    fs::path oracle_out;

    // contaminate / train / predict
    fs::path in, spec, mask, model, classifier;
    std::string label = "label";

    // bound
    std::optional<double> epsilon;
    std::string grid;
    fs::path weights;
    std::optional<double> d_hat, lambda;
    int vc_dim = 11;
    long long m_prime = 1000;
    double delta = 0.05;

    // misreg
    double rotate = 10.0, offset_sigma = 0.1;
    bool shared_offset = false;
    std::size_t boundary_samples = 150, sample_size = 2000, folds = 5;
};

int cmd_run(const Options& o) {
    auto config = harness::load_experiment_config(o.config);
    config.workers = o.workers;
    const auto report = harness::run_contamination_experiment(config);
    harness::emit_report(report, {harness::ReportFormat::csv, harness::ReportFormat::svg, harness::ReportFormat::json},
                         o.out);
    for (const auto& f : report.failures) std::cerr << "failed: " << f << '\n';
    std::printf("clean error %.4f over %zu split(s); %zu cell(s); %s\n", report.clean_error,
                report.clean_errors.size(), report.cells.size(), report.complete() ? "complete" : "INCOMPLETE");
    return report.complete() ? 0 : 2;
}

int cmd_gen(const Options& o) {
    if (o.gen_kind == "cropland") {
        const auto scene = raster::gen_cropland(o.width, o.height, o.classes,
                                                raster::VegetationProfileSet::defaults(o.classes, o.bands, o.noise_sigma),
                                                o.patchiness, o.seed);
        raster::write_scene(scene, o.out);
        return 0;
    }
    data::LabeledDataset ds;
    if (o.gen_kind == "gaussian") {
        std::vector<double> mu = o.mu.empty() ? std::vector<double>(o.p, 0.5) : parse_list(o.mu);
        auto [sample, oracle] = synth::gen_gaussian_mixture(o.p, mu, o.seed_a, o.n, o.seed);
        ds = std::move(sample);
        if (!o.oracle_out.empty()) {
            ensure_parent(o.oracle_out);
            harness::write_text(o.oracle_out, oracle.to_json().dump(2) + "\n");
        }
    } else {
        ds = synth::gen_pattern(synth::parse_pattern_kind(o.gen_kind), o.n, o.seed);
    }
    ensure_parent(o.out);
    data::write_csv(ds, o.out);
    return 0;
}

int cmd_contaminate(const Options& o) {
    const auto ds = data::load_csv(o.in, {label_column(o.label), std::nullopt, std::nullopt});
    const auto spec = contamination::ContaminationSpec::from_json(read_json(o.spec));
    const auto result = contamination::contaminate(ds, spec);
    ensure_parent(o.out);
    data::write_csv(result.data, o.out);
    if (!o.mask.empty()) {
        std::string text = "altered\n";
        for (bool a : result.altered) text += a ? "1\n" : "0\n";
        ensure_parent(o.mask);
        harness::write_text(o.mask, text);
    }
    std::printf("altered %zu of %zu rows\n", result.altered_count(), ds.size());
    return 0;
}

int cmd_train(const Options& o) {
    const auto ds = data::load_csv(o.in, {label_column(o.label), std::nullopt, std::nullopt});
    const auto cfg = o.classifier.empty() ? clf::ClassifierConfig{} : clf::ClassifierConfig::from_json(read_json(o.classifier));
    const auto model = clf::train_classifier(cfg, ds);
    ensure_parent(o.model);
    harness::write_text(o.model, model.to_json().dump() + "\n");
    const auto eval = clf::evaluate(model.predict(ds.features()), ds);
    std::printf("training error %.4f%s\n", eval.error_rate, model.converged() ? "" : " (not converged)");
    return 0;
}

int cmd_predict(const Options& o) {
    const auto model = clf::TrainedClassifier::from_json(read_json(o.model));
    const auto ds = data::load_csv(o.in, {label_column(o.label), std::nullopt, std::nullopt});
    const auto pred = model.predict(ds.features());
    std::string text = "prediction\n";
    for (int v : pred) text += std::to_string(v) + "\n";
    ensure_parent(o.out);
    harness::write_text(o.out, text);
    std::printf("error %.4f on %zu rows\n", clf::evaluate(pred, ds).error_rate, ds.size());
    return 0;
}

int cmd_bound(const Options& o) {
    std::vector<double> eps;
    if (o.epsilon) eps.push_back(*o.epsilon);
    if (!o.grid.empty()) {
        const auto g = parse_list(o.grid);
        eps.insert(eps.end(), g.begin(), g.end());
    }
    if (eps.empty()) throw DomainError("give --epsilon or --grid");
    const auto weights = o.weights.empty() ? std::vector<double>{} : read_weights(o.weights);
    json j = json::array();
    std::string csv = "epsilon,two_class_bound,multi_class_bound,ben_david_bound,ben_david_bound_plot\n";
    for (double e : eps) {
        bounds::BoundReport r;
        r.epsilon = e;
        r.two_class_bound = bounds::two_class_bound(e);
        if (!weights.empty()) r.multi_class_bound = bounds::multi_class_bound(e, weights);
        if (o.d_hat) {
            bounds::BenDavidInputs in{*o.d_hat, o.vc_dim, o.m_prime, o.delta, o.lambda.value_or(0.0)};
            r.ben_david_inputs = in;
            r.ben_david_bound = bounds::ben_david_bound(in);
        }
        j.push_back(r.to_json());
        csv += harness::format_double(e) + "," + harness::format_double(r.two_class_bound) + "," +
               (r.multi_class_bound ? harness::format_double(*r.multi_class_bound) : "") + "," +
               (r.ben_david_bound ? harness::format_double(*r.ben_david_bound) : "") + "," +
               (r.ben_david_bound ? harness::format_double(std::min(*r.ben_david_bound, bounds::kBenDavidPlotCeiling))
                                  : "") +
               "\n";
    }
    fs::create_directories(o.out);
    harness::write_text(o.out / "bounds.json", j.dump(2) + "\n");
    harness::write_text(o.out / "bounds.csv", csv);
    std::fputs(csv.c_str(), stdout);
    return 0;
}

int cmd_compare(const Options& o) {
    harness::BoundComparisonConfig c;
    c.mixture.p = o.p;
    c.mixture.seed_a = o.seed_a;
    c.mixture.n_train = o.n;
    if (!o.mu.empty()) c.mixture.mu = parse_list(o.mu);
    if (!o.grid.empty()) c.epsilons = parse_list(o.grid);
    if (!o.classifier.empty()) c.classifier = clf::ClassifierConfig::from_json(read_json(o.classifier));
    c.probe = c.classifier;
    c.delta = o.delta;
    c.seed = o.seed;
    const auto rows = harness::run_bound_comparison(c);
    harness::emit_bound_comparison(rows, o.out);
    for (const auto& r : rows) {
        std::printf("eps=%.3f two_class=%.4f ben_david=%.4f d_hat=%.4f\n", r.bound.epsilon, r.bound.two_class_bound,
                    *r.bound.ben_david_bound, r.bound.ben_david_inputs->d_hat);
    }
    return 0;
}

int cmd_misreg(const Options& o) {
    const auto scene = raster::read_scene(o.in);
    raster::MisregParams params{o.rotate, o.offset_sigma, o.shared_offset, o.seed};
    const auto result = raster::misregister(scene, params);
    raster::write_scene(result.scene, o.out);
    const auto& d = result.scene;
    json offsets = json::array();
    for (const auto& off : result.offsets) offsets.push_back({off[0], off[1]});
    const json summary = {
        {"rotation_deg", o.rotate},
        {"offset_sigma", o.offset_sigma},
        {"shared_offset", o.shared_offset},
        {"seed", o.seed},
        {"offsets", offsets},
        {"crop", {{"x", result.crop.x}, {"y", result.crop.y}, {"width", result.crop.width}, {"height", result.crop.height}}},
        {"epsilon", raster::misreg_epsilon(scene, d, result.alignment)},
        {"boundary_fraction_patch", raster::boundary_fraction(d.labels, d.width, d.height, raster::PatchMode{}, d.valid)},
        {"boundary_fraction_sampling",
         raster::boundary_fraction(d.labels, d.width, d.height, raster::SamplingMode{o.boundary_samples, o.seed}, d.valid)}};
    harness::write_text(o.out / "misreg.json", summary.dump(2) + "\n");
    std::printf("%zux%zu -> %zux%zu, epsilon %.4f\n", scene.width, scene.height, d.width, d.height,
                summary["epsilon"].get<double>());
    return 0;
}

int cmd_misreg_eval(const Options& o) {
    harness::MisregExperimentConfig c;
    c.scene = {o.width, o.height, o.classes, o.bands, o.noise_sigma, o.patchiness, o.seed};
    c.pipeline = {o.rotate, o.offset_sigma, o.shared_offset, o.seed};
    if (!o.classifier.empty()) c.classifier = clf::ClassifierConfig::from_json(read_json(o.classifier));
    c.sample_size = o.sample_size;
    c.folds = o.folds;
    c.boundary_samples = o.boundary_samples;
    c.seed = o.seed;
    c.workers = o.workers;
    const auto r = harness::run_misreg_experiment(c);
    harness::emit_misreg_report(r, o.out);
    std::printf("accuracy clean %s%% misreg %s%% drop %.4f; epsilon %.4f, bound %.4f\n",
                clf::format_accuracy_percent(r.mean_clean_accuracy).c_str(),
                clf::format_accuracy_percent(r.mean_misreg_accuracy).c_str(), r.accuracy_drop, r.truth.epsilon,
                r.truth.applicable());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data contamination experiments: generators, contamination, SVM/k-NN, bounds and raster mis-registration"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "Run an experiment sweep from a JSON config");
    run->add_option("--config", o.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", o.out, "Output directory")->required();

    auto* gen = app.add_subcommand("gen", "Generate a dataset (CSV) or scene (directory)");
    gen->add_option("kind", o.gen_kind, "gaussian | four_class | nested_square | cropland")
        ->required()
        ->check(CLI::IsMember({"gaussian", "four_class", "nested_square", "cropland"}));
    gen->add_option("--n", o.n, "Rows");
    gen->add_option("--seed", o.seed, "Sample seed");
    gen->add_option("--p", o.p, "Dimension (gaussian)");
    gen->add_option("--seed-a", o.seed_a, "Covariance seed (gaussian)");
    gen->add_option("--mu", o.mu, "Comma-separated mean (gaussian; default 0.5 each)");
    gen->add_option("--oracle-out", o.oracle_out, "Write the mixture oracle JSON here");
    gen->add_option("--width", o.width, "Scene width (cropland)");
    gen->add_option("--height", o.height, "Scene height (cropland)");
    gen->add_option("--classes", o.classes, "Land classes (cropland)");
    gen->add_option("--bands", o.bands, "Time points (cropland)");
    gen->add_option("--patchiness", o.patchiness, "Voronoi cells per 10^4 pixels (cropland)");
    gen->add_option("--noise-sigma", o.noise_sigma, "Pixel noise (cropland)");
    gen->add_option("--out", o.out, "CSV path, or directory for cropland")->required();

    auto* cont = app.add_subcommand("contaminate", "Contaminate a CSV dataset");
    cont->add_option("--in", o.in, "Input CSV")->required()->check(CLI::ExistingFile);
    cont->add_option("--spec", o.spec, "Contamination spec JSON")->required()->check(CLI::ExistingFile);
    cont->add_option("--out", o.out, "Contaminated CSV")->required();
    cont->add_option("--mask", o.mask, "CSV marking altered rows");
    cont->add_option("--label-column", o.label, "Label column name or index");

    auto* train = app.add_subcommand("train", "Train a classifier on a CSV dataset");
    train->add_option("--in", o.in, "Training CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--classifier", o.classifier, "Classifier config JSON")->check(CLI::ExistingFile);
    train->add_option("--model", o.model, "Model JSON output")->required();
    train->add_option("--label-column", o.label, "Label column name or index");

    auto* predict = app.add_subcommand("predict", "Predict labels for a CSV dataset");
    predict->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
    predict->add_option("--in", o.in, "CSV to classify")->required()->check(CLI::ExistingFile);
    predict->add_option("--out", o.out, "Predictions CSV")->required();
    predict->add_option("--label-column", o.label, "Label column name or index");

    auto* bound = app.add_subcommand("bound", "Evaluate theoretical bounds");
    bound->add_option("--epsilon", o.epsilon, "Single contamination level");
    bound->add_option("--grid", o.grid, "Comma-separated contamination levels");
    bound->add_option("--weights", o.weights, "Class weights (JSON array or comma list)")->check(CLI::ExistingFile);
    bound->add_option("--d-hat", o.d_hat, "Empirical HΔH divergence, enables the domain-adaptation bound");
    bound->add_option("--vc-dim", o.vc_dim, "VC dimension");
    bound->add_option("--m-prime", o.m_prime, "Unlabelled sample size per domain");
    bound->add_option("--delta", o.delta, "Confidence parameter");
    bound->add_option("--lambda", o.lambda, "Joint-hypothesis error");
    bound->add_option("--out", o.out, "Output directory")->required();

    auto* compare = app.add_subcommand("compare", "Compare the two-class and domain-adaptation bounds on the mixture");
    compare->add_option("--n", o.n, "Sample size per domain");
    compare->add_option("--p", o.p, "Dimension");
    compare->add_option("--seed-a", o.seed_a, "Covariance seed");
    compare->add_option("--mu", o.mu, "Comma-separated mean");
    compare->add_option("--grid", o.grid, "Comma-separated contamination levels");
    compare->add_option("--classifier", o.classifier, "Classifier config JSON")->check(CLI::ExistingFile);
    compare->add_option("--delta", o.delta, "Confidence parameter");
    compare->add_option("--seed", o.seed, "Seed");
    compare->add_option("--out", o.out, "Output directory")->required();

    auto* misreg = app.add_subcommand("misreg", "Mis-register a scene directory");
    misreg->add_option("--in", o.in, "Input scene directory")->required()->check(CLI::ExistingDirectory);
    misreg->add_option("--out", o.out, "Output scene directory")->required();
    misreg->add_option("--rotate", o.rotate, "Clockwise rotation in degrees");
    misreg->add_option("--offset-sigma", o.offset_sigma, "Offset standard deviation in pixels");
    misreg->add_flag("--shared-offset", o.shared_offset, "One offset for all bands");
    misreg->add_option("--boundary-samples", o.boundary_samples, "Pixels for the sampling estimator");
    misreg->add_option("--seed", o.seed, "Offset seed");

    auto* meval = app.add_subcommand("misreg-eval", "Clean versus mis-registered training on a synthetic scene");
    meval->add_option("--width", o.width, "Scene width");
    meval->add_option("--height", o.height, "Scene height");
    meval->add_option("--classes", o.classes, "Land classes");
    meval->add_option("--bands", o.bands, "Time points");
    meval->add_option("--patchiness", o.patchiness, "Voronoi cells per 10^4 pixels");
    meval->add_option("--noise-sigma", o.noise_sigma, "Pixel noise");
    meval->add_option("--rotate", o.rotate, "Clockwise rotation in degrees");
    meval->add_option("--offset-sigma", o.offset_sigma, "Offset standard deviation in pixels");
    meval->add_flag("--shared-offset", o.shared_offset, "One offset for all bands");
    meval->add_option("--sample-size", o.sample_size, "Pixels sampled for the folds");
    meval->add_option("--folds", o.folds, "Folds");
    meval->add_option("--boundary-samples", o.boundary_samples, "Pixels for the sampling estimator");
    meval->add_option("--classifier", o.classifier, "Classifier config JSON")->check(CLI::ExistingFile);
    meval->add_option("--seed", o.seed, "Seed");
    meval->add_option("--out", o.out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(o);
        if (*gen) return cmd_gen(o);
        if (*cont) return cmd_contaminate(o);
        if (*train) return cmd_train(o);
        if (*predict) return cmd_predict(o);
        if (*bound) return cmd_bound(o);
        if (*compare) return cmd_compare(o);
        if (*misreg) return cmd_misreg(o);
        if (*meval) return cmd_misreg_eval(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
