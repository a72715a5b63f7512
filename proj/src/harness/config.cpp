#include "contam/harness/config.hpp"

#include "contam/core/error.hpp"
#include "contam/core/hash.hpp"

#include <fstream>

namespace contam::harness {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

json label_column_json(const data::LabelColumn& c) {
    if (const auto* i = std::get_if<std::size_t>(&c)) return *i;
    return std::get<std::string>(c);
}

data::LabelColumn label_column_from(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.get<std::size_t>();
}

json dataset_json(const DatasetSource& src) {
    return std::visit(
        overloaded{
            [](const GaussianMixtureSource& g) -> json {
                return {{"type", "gaussian_mixture"}, {"p", g.p},           {"mu", g.mu},
                        {"seed_a", g.seed_a},         {"n_train", g.n_train}, {"n_test", g.n_test},
                        {"n_mc", g.n_mc}};
            },
            [](const PatternSource& p) -> json {
                return {{"type", "pattern"}, {"kind", synth::to_string(p.kind)}, {"n", p.n}};
            },
            [](const CsvSource& c) -> json {
                json j = {{"type", "csv"}, {"path", c.path.generic_string()},
                          {"label_column", label_column_json(c.label_column)}};
                if (c.test_path) j["test_path"] = c.test_path->generic_string();
                if (c.class_count) j["class_count"] = *c.class_count;
                return j;
            },
            [](const RasterSource& r) -> json { return {{"type", "raster"}, {"path", r.path.generic_string()}}; },
        },
        src);
}

DatasetSource dataset_from(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "gaussian_mixture") {
        GaussianMixtureSource g;
        g.p = j.value("p", g.p);
        g.mu = j.value("mu", g.mu);
        g.seed_a = j.value("seed_a", g.seed_a);
        g.n_train = j.value("n_train", g.n_train);
        g.n_test = j.value("n_test", g.n_test);
        g.n_mc = j.value("n_mc", g.n_mc);
        return g;
    }
    if (type == "pattern") {
        PatternSource p;
        p.kind = synth::parse_pattern_kind(j.at("kind").get<std::string>());
        p.n = j.value("n", p.n);
        return p;
    }
    if (type == "csv") {
        CsvSource c;
        c.path = j.at("path").get<std::string>();
        if (j.contains("label_column")) c.label_column = label_column_from(j.at("label_column"));
        if (j.contains("test_path")) c.test_path = j.at("test_path").get<std::string>();
        if (j.contains("class_count")) c.class_count = j.at("class_count").get<int>();
        return c;
    }
    if (type == "raster") return RasterSource{j.at("path").get<std::string>()};
    throw SchemaError("unknown dataset type '" + type + "'");
}

json split_json(const SplitConfig& s) {
    return std::visit(overloaded{
                          [](const data::Holdout& h) -> json { return {{"mode", "holdout"}, {"fraction", h.fraction}}; },
                          [](const data::KFold& k) -> json { return {{"mode", "kfold"}, {"k", k.k}}; },
                          [](const GivenSplit&) -> json { return {{"mode", "given"}}; },
                      },
                      s);
}

SplitConfig split_from(const json& j) {
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "holdout") return data::Holdout{j.value("fraction", 0.3)};
    if (mode == "kfold") return data::KFold{j.value("k", std::size_t{5})};
    if (mode == "given") return GivenSplit{};
    throw SchemaError("unknown split mode '" + mode + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
    for (double e : epsilons) {
        if (!(e >= 0.0 && e < 0.5)) throw DomainError("epsilon grid values must lie in [0, 0.5)");
    }
    if (instances < 1) throw DomainError("instances must be >= 1");
    if (repetitions < 1) throw DomainError("repetitions must be >= 1");
    if (kinds.empty()) throw DomainError("at least one contamination kind is required");
    for (auto k : kinds) {
        if (k == contamination::Kind::c0 && !target_class) throw DomainError("c0 needs target_class");
    }
    if (const auto* g = std::get_if<GaussianMixtureSource>(&dataset)) {
        if (g->p < 1 || g->n_train < 2 || g->n_test < 1) throw DomainError("mixture needs p >= 1, n_train >= 2, n_test >= 1");
        if (!g->mu.empty() && g->mu.size() != g->p) throw DomainError("mu length must equal p");
    }
    const bool given = std::holds_alternative<GivenSplit>(split);
    if (given) {
        const auto* c = std::get_if<CsvSource>(&dataset);
        const bool has_test = std::holds_alternative<GaussianMixtureSource>(dataset) || (c && c->test_path);
        if (!has_test) throw SchemaError("split mode 'given' needs a source with its own test set");
    }
    if (const auto* h = std::get_if<data::Holdout>(&split)) {
        if (!(h->fraction > 0 && h->fraction < 1)) throw DomainError("holdout fraction must lie in (0, 1)");
    }
    if (const auto* k = std::get_if<data::KFold>(&split)) {
        if (k->k < 2) throw DomainError("kfold needs k >= 2");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    json kinds_json = json::array();
    for (auto k : kinds) kinds_json.push_back(contamination::to_string(k));
    json j = {{"dataset", dataset_json(dataset)},
              {"split", split_json(split)},
              {"scale", scale},
              {"epsilons", epsilons},
              {"kinds", kinds_json},
              {"instances", instances},
              {"repetitions", repetitions},
              {"classifier", classifier.to_json()},
              {"seed", seed},
              {"workers", workers}};
    if (target_class) j["target_class"] = *target_class;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (!j.is_object()) throw SchemaError("experiment config must be a JSON object");
        c.dataset = dataset_from(j.at("dataset"));
        if (j.contains("split")) {
            c.split = split_from(j.at("split"));
        } else if (!std::holds_alternative<GaussianMixtureSource>(c.dataset)) {
            c.split = data::Holdout{0.3};
        }
        c.scale = j.value("scale", false);
        c.epsilons = j.value("epsilons", c.epsilons);
        if (j.contains("kinds")) {
            c.kinds.clear();
            for (const auto& k : j.at("kinds")) c.kinds.push_back(contamination::parse_kind(k.get<std::string>()));
        }
        if (j.contains("target_class")) c.target_class = j.at("target_class").get<int>();
        c.instances = j.value("instances", c.instances);
        c.repetitions = j.value("repetitions", c.repetitions);
        if (j.contains("classifier")) c.classifier = clf::ClassifierConfig::from_json(j.at("classifier"));
        c.seed = j.value("seed", c.seed);
        c.workers = j.value("workers", c.workers);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string ExperimentConfig::hash() const {
    json j = to_json();
    j.erase("workers");
    return Fnv64().text(j.dump()).hex();
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return load_experiment_config(path, path.parent_path());
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, const std::filesystem::path& base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    ExperimentConfig c = ExperimentConfig::from_json(j);
    auto resolve = [&](std::filesystem::path& p) {
        if (p.is_relative()) p = base / p;
    };
    if (auto* csv = std::get_if<CsvSource>(&c.dataset)) {
        resolve(csv->path);
        if (csv->test_path) resolve(*csv->test_path);
    } else if (auto* r = std::get_if<RasterSource>(&c.dataset)) {
        resolve(r->path);
    }
    return c;
}

}  // namespace contam::harness
