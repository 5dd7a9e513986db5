#include "denscls/dataset.hpp"

#include "denscls/scaler.hpp"
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>

using namespace denscls;

namespace {

// Writes content to a scratch file and removes it when the test ends.
struct ScratchFile {
    explicit ScratchFile(const std::string& content, const char* name = "scratch.csv")
        : path(name) {
        std::ofstream out(path);
        out << content;
    }
    ~ScratchFile() { std::remove(path.c_str()); }
    std::string path;
};

CsvSchema plain_schema(std::string label) {
    CsvSchema schema;
    schema.label_column = std::move(label);
    return schema;
}

}  // namespace

TEST_CASE("load_csv: numeric features, label split off, ignored column dropped") {
    const ScratchFile file(
        "row.names,height,famhist,weight,outcome\n"
        "1,1.5,Present,70,yes\n"
        "2,1.8,Absent,82.5,no\n"
        "3,1.65,Absent,-3e-1,yes\n");
    CsvSchema schema = plain_schema("outcome");
    schema.ignore_columns = {"row.names"};
    schema.categorical_encodings["famhist"] = {{"Present", 1.0}, {"Absent", 0.0}};
    schema.provenance = "scratch";

    const Dataset ds = load_csv(file.path, schema);
    CHECK(ds.n() == 3);
    CHECK(ds.dim() == 3);
    CHECK(ds.feature_names == std::vector<std::string>{"height", "famhist", "weight"});
    CHECK(ds.labels == std::vector<std::string>{"yes", "no", "yes"});
    CHECK(ds.features(0, 0) == 1.5);
    CHECK(ds.features(0, 1) == 1.0);  // Present
    CHECK(ds.features(1, 1) == 0.0);  // Absent
    CHECK(ds.features(2, 2) == -0.3);
    CHECK(ds.provenance == "scratch");
}

TEST_CASE("load_csv: empty cell names its line and column") {
    const ScratchFile file("a,b,label\n1,2,x\n3,,y\n");
    try {
        load_csv(file.path, plain_schema("label"));
        FAIL("expected UnparseableValue");
    } catch (const UnparseableValue& e) {
        CHECK(e.line == 3);
        CHECK(e.column == "b");
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
}

TEST_CASE("load_csv: non-numeric content and undeclared categories are rejected") {
    const ScratchFile garbage("a,label\nnot-a-number,x\n");
    CHECK_THROWS_AS(load_csv(garbage.path, plain_schema("label")), UnparseableValue);

    const ScratchFile bad_category("famhist,label\nMaybe,x\n", "scratch2.csv");
    CsvSchema schema = plain_schema("label");
    schema.categorical_encodings["famhist"] = {{"Present", 1.0}, {"Absent", 0.0}};
    CHECK_THROWS_AS(load_csv(bad_category.path, schema), UnparseableValue);
}

TEST_CASE("load_csv: schema violations are reported as such") {
    const ScratchFile missing_label("a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(missing_label.path, plain_schema("label")), SchemaMismatch);

    const ScratchFile ragged("a,b,label\n1,2,x\n1,x\n", "scratch2.csv");
    CHECK_THROWS_AS(load_csv(ragged.path, plain_schema("label")), SchemaMismatch);

    const ScratchFile short_file("a,label\n1,x\n", "scratch3.csv");
    CsvSchema schema = plain_schema("label");
    schema.expected_rows = 5;
    CHECK_THROWS_AS(load_csv(short_file.path, schema), SchemaMismatch);

    schema.expected_rows = -1;
    schema.expected_features = 4;
    CHECK_THROWS_AS(load_csv(short_file.path, schema), SchemaMismatch);

    CHECK_THROWS_AS(load_csv("does-not-exist.csv", plain_schema("label")), SchemaMismatch);
}

TEST_CASE("load_csv: '#' provenance lines and blanks are invisible to parsing") {
    const ScratchFile file(
        "# denscls 0.1.0 generate-toy\n"
        "# kind = moons  n = 2\n"
        "x,y,label\n"
        "\n"
        "1,2,a\n"
        "# a stray mid-file comment\n"
        "3,4,b\n");
    const Dataset ds = load_csv(file.path, plain_schema("label"));
    CHECK(ds.n() == 2);
    CHECK(ds.labels == std::vector<std::string>{"a", "b"});
    CHECK(ds.features(1, 1) == 4.0);

    // Error coordinates still count physical lines, comments included.
    const ScratchFile bad("# stamp\nx,label\noops,a\n", "scratch3.csv");
    try {
        load_csv(bad.path, plain_schema("label"));
        FAIL("expected UnparseableValue");
    } catch (const UnparseableValue& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("load_csv: an empty label column loads every column as a feature") {
    // Prediction inputs carry no labels; with schema.label_column empty
    // every non-ignored column is a feature.
    const ScratchFile unlabeled("x,y\n1,2\n3,4\n-5,0.5\n");
    CsvSchema schema;
    const Dataset ds = load_csv(unlabeled.path, schema);
    CHECK(ds.n() == 3);
    CHECK(ds.dim() == 2);
    CHECK(ds.labels.empty());
    CHECK(ds.feature_names == std::vector<std::string>{"x", "y"});
    CHECK(ds.features(1, 0) == 3.0);
    CHECK(ds.features(2, 1) == 0.5);

    // A stray text column still has to be ignored explicitly.
    const ScratchFile with_text("x,y,note\n1,2,fine\n3,4,odd\n", "scratch2.csv");
    CHECK_THROWS_AS(load_csv(with_text.path, schema), UnparseableValue);
    schema.ignore_columns = {"note"};
    const Dataset trimmed = load_csv(with_text.path, schema);
    CHECK(trimmed.n() == 2);
    CHECK(trimmed.dim() == 2);
    CHECK(trimmed.labels.empty());
    CHECK(trimmed.features(1, 1) == 4.0);
}

TEST_CASE("write_dataset_csv then load_csv reproduces the data bit for bit") {
    Rng rng(11);
    const Dataset ds = make_moons(60, 0.25, rng);
    write_dataset_csv(ds, "roundtrip.csv");
    const Dataset back = load_csv("roundtrip.csv", plain_schema("label"));
    std::remove("roundtrip.csv");
    CHECK(back.feature_names == ds.feature_names);
    CHECK(back.labels == ds.labels);
    CHECK((back.features - ds.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("saheart file: 462 rows, 9 features, binary labels, famhist encoded") {
    const Dataset ds = load_csv(DENSCLS_SOURCE_DIR "/data/saheart.csv", saheart_schema());
    CHECK(ds.n() == 462);
    CHECK(ds.dim() == 9);
    const std::set<std::string> distinct(ds.labels.begin(), ds.labels.end());
    CHECK(distinct == std::set<std::string>{"0", "1"});
    CHECK(std::count(ds.labels.begin(), ds.labels.end(), "0") == 302);
    CHECK(std::count(ds.labels.begin(), ds.labels.end(), "1") == 160);
    const Index famhist = 4;  // sbp, tobacco, ldl, adiposity, famhist, ...
    CHECK(ds.feature_names[famhist] == "famhist");
    for (Index i = 0; i < ds.n(); ++i) {
        const double v = ds.features(i, famhist);
        CHECK((v == 0.0 || v == 1.0));
    }
}

TEST_CASE("haberman file: 306 rows, 3 features, binary labels") {
    const Dataset ds = load_csv(DENSCLS_SOURCE_DIR "/data/haberman.csv", haberman_schema());
    CHECK(ds.n() == 306);
    CHECK(ds.dim() == 3);
    CHECK(std::count(ds.labels.begin(), ds.labels.end(), "1") == 225);
    CHECK(std::count(ds.labels.begin(), ds.labels.end(), "2") == 81);
}

TEST_CASE("make_moons: noiseless arcs match their parametric equations") {
    Rng rng(7);
    const Dataset ds = make_moons(40, 0.0, rng);
    REQUIRE(ds.n() == 40);
    for (Index i = 0; i < 20; ++i) {
        const double t = M_PI * static_cast<double>(i) / 19.0;
        CHECK(ds.features(i, 0) == std::cos(t));
        CHECK(ds.features(i, 1) == std::sin(t));
        CHECK(ds.labels[static_cast<std::size_t>(i)] == "0");
        CHECK(ds.features(i, 1) >= 0.0);  // upper arc
    }
    for (Index i = 0; i < 20; ++i) {
        const double t = M_PI * static_cast<double>(i) / 19.0;
        CHECK(ds.features(20 + i, 0) == 1.0 - std::cos(t));
        CHECK(ds.features(20 + i, 1) == 0.5 - std::sin(t));
        CHECK(ds.labels[static_cast<std::size_t>(20 + i)] == "1");
    }
}

TEST_CASE("make_circles: noiseless radii are exactly 1 and the factor") {
    Rng rng(7);
    const Dataset ds = make_circles(80, 0.5, 0.0, rng);
    for (Index i = 0; i < 40; ++i) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / 40.0;
        CHECK(ds.features(i, 0) == std::cos(t));
        CHECK(ds.features(i, 1) == std::sin(t));
        CHECK(ds.features(40 + i, 0) == 0.5 * std::cos(t));
        CHECK(ds.features(40 + i, 1) == 0.5 * std::sin(t));
        CHECK(std::abs(ds.features(i, 0) * ds.features(i, 0) +
                       ds.features(i, 1) * ds.features(i, 1) - 1.0) < 1e-15);
    }
    CHECK(std::count(ds.labels.begin(), ds.labels.end(), "0") == 40);
    CHECK(std::count(ds.labels.begin(), ds.labels.end(), "1") == 40);
}

TEST_CASE("toy generators: same seed regenerates bit-identical data") {
    Rng a(7), b(7);
    const Dataset first = make_moons(400, 0.1, a);
    const Dataset second = make_moons(400, 0.1, b);
    CHECK((first.features - second.features).cwiseAbs().maxCoeff() == 0.0);
    CHECK(first.labels == second.labels);

    Rng c(9), d(9);
    const Dataset f1 = make_circles(400, 0.5, 0.1, c);
    const Dataset f2 = make_circles(400, 0.5, 0.1, d);
    CHECK((f1.features - f2.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("toy generators: odd n and negative noise are rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(make_moons(41, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(make_circles(0, 0.5, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(make_moons(40, -0.1, rng), std::invalid_argument);
}

TEST_CASE("scaler: training columns map to mean 0, variance 1") {
    Rng rng(13);
    Matrix data(200, 3);
    for (Index i = 0; i < 200; ++i) {
        data(i, 0) = 5.0 + 2.0 * rng.normal();
        data(i, 1) = -3.0 + 0.1 * rng.normal();
        data(i, 2) = 100.0 * rng.normal();
    }
    const Scaler scaler = Scaler::fit(data);
    const Matrix z = scaler.apply(data);
    for (Index j = 0; j < 3; ++j) {
        CHECK(std::abs(z.col(j).mean()) < 1e-10);
        CHECK(z.col(j).squaredNorm() / 200.0 == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("scaler: constant column gets stddev 1 and maps to zero") {
    Matrix data(5, 2);
    data.col(0).setConstant(7.0);
    data.col(1) << 1, 2, 3, 4, 5;
    const Scaler scaler = Scaler::fit(data);
    CHECK(scaler.stddevs[0] == 1.0);
    CHECK(scaler.apply(data).col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scaler: invert(apply(x)) round-trips") {
    Rng rng(17);
    Matrix data(50, 4);
    for (Index i = 0; i < 50; ++i)
        for (Index j = 0; j < 4; ++j) data(i, j) = 10.0 * rng.normal() + static_cast<double>(j);
    const Scaler scaler = Scaler::fit(data);
    CHECK((scaler.invert(scaler.apply(data)) - data).cwiseAbs().maxCoeff() < 1e-12);
    Vector x(4);
    x << -4.0, 0.5, 3.25, 11.0;
    CHECK((scaler.invert(scaler.apply(x)) - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("stratified_kfold: 10+10 rows over 5 folds gives 2+2 per fold") {
    Dataset ds;
    ds.features = Matrix::Zero(20, 1);
    for (int i = 0; i < 20; ++i) ds.labels.push_back(i < 10 ? "A" : "B");
    const FoldPlan plan = stratified_kfold(ds, 5, 3);
    for (int fold = 0; fold < 5; ++fold) {
        int a_count = 0, b_count = 0;
        for (int i = 0; i < 20; ++i)
            if (plan.assignments[static_cast<std::size_t>(i)] == fold)
                ++(i < 10 ? a_count : b_count);
        CHECK(a_count == 2);
        CHECK(b_count == 2);
    }
}

TEST_CASE("stratified_kfold: assignments are an exact partition") {
    Rng rng(19);
    Dataset ds;
    ds.features = Matrix::Zero(137, 1);
    for (int i = 0; i < 137; ++i)
        ds.labels.push_back(rng.uniform() < 0.3 ? "rare" : "common");
    const FoldPlan plan = stratified_kfold(ds, 4, 11);
    REQUIRE(plan.assignments.size() == 137);
    std::array<int, 4> totals{};
    for (int a : plan.assignments) {
        REQUIRE(a >= 0);
        REQUIRE(a < 4);
        ++totals[static_cast<std::size_t>(a)];
    }
    int sum = 0;
    for (int t : totals) sum += t;
    CHECK(sum == 137);

    // Per-class fold counts differ by at most one.
    for (const std::string label : {"rare", "common"}) {
        std::array<int, 4> counts{};
        for (int i = 0; i < 137; ++i)
            if (ds.labels[static_cast<std::size_t>(i)] == label)
                ++counts[static_cast<std::size_t>(plan.assignments[static_cast<std::size_t>(i)])];
        const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
        CHECK(*hi - *lo <= 1);
    }
}

TEST_CASE("stratified_kfold: 462 rows split 302/160 gives folds 93,93,92,92,92") {
    Dataset ds;
    ds.features = Matrix::Zero(462, 1);
    for (int i = 0; i < 462; ++i) ds.labels.push_back(i < 302 ? "0" : "1");
    const FoldPlan plan = stratified_kfold(ds, 5, 123);
    std::vector<int> sizes(5, 0);
    for (int a : plan.assignments) ++sizes[static_cast<std::size_t>(a)];
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    CHECK(sizes == std::vector<int>{93, 93, 92, 92, 92});
}

TEST_CASE("stratified_kfold: deterministic per seed, class smaller than folds rejected") {
    Dataset ds;
    ds.features = Matrix::Zero(40, 1);
    for (int i = 0; i < 40; ++i) ds.labels.push_back(i % 2 == 0 ? "A" : "B");
    CHECK(stratified_kfold(ds, 5, 7).assignments == stratified_kfold(ds, 5, 7).assignments);
    CHECK(stratified_kfold(ds, 5, 7).assignments != stratified_kfold(ds, 5, 8).assignments);

    Dataset tiny;
    tiny.features = Matrix::Zero(7, 1);
    tiny.labels = {"A", "A", "A", "A", "B", "B", "B"};
    CHECK_THROWS_AS(stratified_kfold(tiny, 5, 1), ClassTooSmall);
}

TEST_CASE("compute_metrics: perfect predictor") {
    const std::vector<std::string> labels = {"1", "0", "1", "0"};
    std::vector<std::optional<std::string>> predicted(labels.begin(), labels.end());
    const MetricsReport report = compute_metrics(predicted, labels, "1");
    CHECK(report.accuracy == 1.0);
    CHECK(report.f1 == 1.0);
    CHECK(report.tp == 2);
    CHECK(report.tn == 2);
    CHECK(report.fp == 0);
    CHECK(report.fn == 0);
}

TEST_CASE("compute_metrics: one of each confusion cell") {
    const std::vector<std::string> labels = {"1", "0", "1", "0"};
    const std::vector<std::optional<std::string>> predicted = {"1", "1", "0", "0"};
    const MetricsReport report = compute_metrics(predicted, labels, "1");
    CHECK(report.accuracy == 0.5);
    CHECK(report.f1 == 0.5);
    CHECK(report.tp == 1);
    CHECK(report.fp == 1);
    CHECK(report.fn == 1);
    CHECK(report.tn == 1);
}

TEST_CASE("compute_metrics: random predictions match a naive recount") {
    Rng rng(23);
    std::vector<std::string> labels;
    std::vector<std::optional<std::string>> predicted;
    for (int i = 0; i < 50; ++i) {
        labels.push_back(rng.uniform() < 0.4 ? "pos" : "neg");
        predicted.push_back(rng.uniform() < 0.5 ? "pos" : "neg");
    }
    const MetricsReport report = compute_metrics(predicted, labels, "pos");

    long tp = 0, fp = 0, fn = 0, tn = 0, right = 0;
    for (int i = 0; i < 50; ++i) {
        const auto& p = *predicted[static_cast<std::size_t>(i)];
        const auto& y = labels[static_cast<std::size_t>(i)];
        if (p == y) ++right;
        if (p == "pos" && y == "pos") ++tp;
        if (p == "pos" && y != "pos") ++fp;
        if (p != "pos" && y == "pos") ++fn;
        if (p != "pos" && y != "pos") ++tn;
    }
    CHECK(report.tp == tp);
    CHECK(report.fp == fp);
    CHECK(report.fn == fn);
    CHECK(report.tn == tn);
    CHECK(report.accuracy == static_cast<double>(right) / 50.0);
    CHECK(report.f1 ==
          doctest::Approx(2.0 * tp / (2.0 * tp + fp + fn)).epsilon(1e-15));
}

TEST_CASE("compute_metrics: Unclassified is wrong for accuracy, negative for F1") {
    const std::vector<std::string> labels = {"1", "1", "0", "0"};
    const std::vector<std::optional<std::string>> predicted = {"1", std::nullopt, std::nullopt,
                                                               "0"};
    const MetricsReport report = compute_metrics(predicted, labels, "1");
    CHECK(report.unclassified == 2);
    CHECK(report.tp == 1);
    CHECK(report.fn == 1);  // rejected positive counts as a miss
    CHECK(report.fp == 0);  // rejected negative never becomes a positive call
    CHECK(report.tn == 1);
    CHECK(report.accuracy == 0.5);  // both rejections are errors
    CHECK(report.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("compute_metrics: sample order does not matter") {
    Rng rng(29);
    std::vector<std::string> labels;
    std::vector<std::optional<std::string>> predicted;
    for (int i = 0; i < 40; ++i) {
        labels.push_back(rng.uniform() < 0.5 ? "1" : "0");
        const double coin = rng.uniform();
        predicted.push_back(coin < 0.1 ? std::optional<std::string>{}
                                       : std::optional<std::string>{coin < 0.55 ? "1" : "0"});
    }
    const MetricsReport forward = compute_metrics(predicted, labels, "1");
    std::reverse(labels.begin(), labels.end());
    std::reverse(predicted.begin(), predicted.end());
    const MetricsReport backward = compute_metrics(predicted, labels, "1");
    CHECK(forward.accuracy == backward.accuracy);
    CHECK(forward.f1 == backward.f1);
    CHECK(forward.tp == backward.tp);
    CHECK(forward.unclassified == backward.unclassified);
}
