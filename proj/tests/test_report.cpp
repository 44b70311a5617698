#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "halfline/errors.hpp"
#include "halfline/report.hpp"

using namespace halfline;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch_dir() {
    auto d = std::filesystem::temp_directory_path() / "halfline_report_test";
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST(Csv, HeaderOnly) {
    EXPECT_EQ(to_csv({}), std::string(kCsvHeader) + "\n");
}

TEST(Csv, OneRow) {
    const ConvergenceRecord r{"xexp", 1.0, 0.5, 0.1, "remainder", 0.25, std::nullopt};
    EXPECT_EQ(to_csv({r}), std::string(kCsvHeader) +
                               "\nxexp,1.0000000000000000e+00,5.0000000000000000e-01,1.0000000000000001e-01,"
                               "remainder,2.5000000000000000e-01,\n");
}

TEST(Csv, NumbersRoundTrip) {
    const double v = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "");
    EXPECT_EQ(format_number(-2.0), "-2.0000000000000000e+00");
}

TEST(Json, SummaryIsRecomputableFromCsv) {
    std::vector<ConvergenceRecord> rs = {
        {"xexp", 1.0, 1.0, 0.2, "m", 1.0, std::nullopt},
        {"xexp", 1.0, 1.0, 0.1, "m", 0.5, 0.5},
        {"xexp", 1.0, 1.0, 0.05, "n", 0.5, 1.5},
    };
    const CheckOutcome ok{{"m", CheckKind::Monotone, 0.0}, true, "fine"};
    const auto j = nlohmann::json::parse(summary_json(rs, {ok}));
    EXPECT_EQ(j["records"], 3);
    EXPECT_TRUE(j["metrics"]["m"]["monotone"]);
    EXPECT_FALSE(j["metrics"]["n"]["monotone"]);
    EXPECT_EQ(j["checks"][0]["kind"], "monotone");
    EXPECT_TRUE(j["pass"]);

    const CheckOutcome bad{{"n", CheckKind::Monotone, 0.0}, false, "ratio 1.5"};
    EXPECT_FALSE(nlohmann::json::parse(summary_json(rs, {ok, bad}))["pass"]);
}

TEST(Emit, WritesBothFiles) {
    const auto csv = scratch_dir() / "out.csv";
    const std::vector<ConvergenceRecord> rs = {{"xexp", 1.0, 1.0, 0.2, "m", 1.0, std::nullopt}};
    const ReportFiles f = emit_report(rs, csv);
    EXPECT_EQ(f.json, scratch_dir() / "out.json");
    EXPECT_EQ(slurp(f.csv), to_csv(rs));
    EXPECT_EQ(slurp(f.json), summary_json(rs, {}));
}

TEST(Emit, JsonPathNeverOverwritesCsv) {
    const auto csv = scratch_dir() / "out.json";
    const ReportFiles f = emit_report({}, csv);
    EXPECT_NE(f.json, f.csv);
    EXPECT_EQ(slurp(f.csv), to_csv({}));
}

TEST(Emit, UnwritablePathThrows) {
    EXPECT_THROW(emit_report({}, scratch_dir() / "missing" / "dir" / "out.csv"), InvalidArgument);
}
