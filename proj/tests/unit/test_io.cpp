#include "eckart/io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <clocale>
#include <cmath>
#include <limits>
#include <locale>

using namespace eckart;
using namespace eckart::io;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_molecule(text, "mol.json");
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

const char* kWater = R"({
  "name": "water",
  "hbar": 0.5,
  "nuclei": [
    {"mass": 16.0, "position": [0.0, 0.0, 0.1173]},
    {"mass": 1.0, "position": [0.0, 0.7572, -0.4692]},
    {"mass": 1.0, "position": [0.0, -0.7572, -0.4692]}
  ],
  "electrons": {"count": 1}
})";

Report sample_report() {
    Report r;
    r.command = "frame";
    r.molecule = "water";
    r.summary["zeta"] = 1.5;
    r.summary["alpha"] = std::int64_t{3};
    r.summary["missing"] = std::monostate{};
    r.table.columns = {"frame", "Q", "passed", "note"};
    r.table.add_row({std::int64_t{0}, std::vector<double>{0.1, -2.0}, true, std::string("a,b")});
    r.table.add_row({std::int64_t{1}, std::vector<double>{1e-300, 3.0}, false, std::monostate{}});
    return r;
}

}  // namespace

TEST(ParseMolecule, ReadsFields) {
    const MoleculeFile f = parse_molecule(kWater);
    EXPECT_EQ(f.molecule.name(), "water");
    EXPECT_EQ(f.molecule.hbar(), 0.5);
    EXPECT_EQ(f.molecule.nucleus_count(), 3u);
    EXPECT_EQ(f.molecule.electron_count(), 1);
    EXPECT_EQ(f.molecule.electron_mass(), 1.0);
    EXPECT_EQ(f.molecule.equilibrium(1), Vec3(0.0, 0.7572, -0.4692));
    EXPECT_FALSE(f.modes.has_value());
    EXPECT_FALSE(f.hessian.has_value());
}

TEST(ParseMolecule, LoadsDataFiles) {
    EXPECT_EQ(load_molecule(test::data_path("water.json")).molecule.electron_count(), 2);
    EXPECT_EQ(load_molecule(test::data_path("halomethane.json")).molecule.nucleus_count(), 5u);
    EXPECT_THROW(load_molecule(test::data_path("absent.json")), InputError);
}

TEST(ParseMolecule, MissingMassNamesPathAndLine) {
    try {
        load_molecule(test::data_path("missing_mass.json"));
        FAIL();
    } catch (const InputError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("missing_mass.json:5:"), std::string::npos) << what;
        EXPECT_NE(what.find("nuclei[1]"), std::string::npos) << what;
        EXPECT_NE(what.find("mass"), std::string::npos) << what;
    }
}

TEST(ParseMolecule, SchemaErrors) {
    std::string text = kWater;
    EXPECT_NE(error_of("{\"name\": 3}").find("name"), std::string::npos);
    EXPECT_NE(error_of("[1, 2]").find("document"), std::string::npos);
    EXPECT_NE(error_of("{not json").find("malformed JSON"), std::string::npos);

    std::string bad_position = text;
    bad_position.replace(bad_position.find("[0.0, 0.7572, -0.4692]"), 22, "[0.0, 0.7572]");
    const std::string msg = error_of(bad_position);
    EXPECT_NE(msg.find("mol.json:6: nuclei[1].position"), std::string::npos) << msg;

    std::string extra = text;
    extra.replace(extra.find("\"hbar\""), 6, "\"hbarr\"");
    EXPECT_NE(error_of(extra).find("hbarr"), std::string::npos);

    std::string negative = text;
    negative.replace(negative.find("\"count\": 1"), 10, "\"count\": -2");
    EXPECT_NE(error_of(negative).find("electrons.count"), std::string::npos);

    std::string text_mass = text;
    text_mass.replace(text_mass.find("16.0"), 4, "\"x\"");
    EXPECT_NE(error_of(text_mass).find("mol.json:5: nuclei[0].mass"), std::string::npos) << error_of(text_mass);

    std::string zero_mass = text;
    zero_mass.replace(zero_mass.find("16.0"), 4, "0.0");
    EXPECT_NE(error_of(zero_mass), "");
}

TEST(ParseMolecule, ModesAndHessian) {
    std::string text = kWater;
    const std::string modes = R"(, "modes": [[1,0,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0,0],[0,0,1,0,0,0,0,0,0]])";
    std::string with_modes = text;
    with_modes.insert(with_modes.rfind('}'), modes);
    const MoleculeFile f = parse_molecule(with_modes);
    ASSERT_TRUE(f.modes.has_value());
    EXPECT_EQ(f.modes->rows(), 9);
    EXPECT_EQ(f.modes->cols(), 3);
    EXPECT_EQ((*f.modes)(1, 1), 1.0);

    std::string two_modes = text;
    two_modes.insert(two_modes.rfind('}'), R"(, "modes": [[1,0,0,0,0,0,0,0,0]])");
    EXPECT_NE(error_of(two_modes).find("expected 3 mode vectors"), std::string::npos);

    std::string flat = text;
    std::string values;
    for (int i = 0; i < 81; ++i) {
        values += (i ? "," : "") + std::string(i % 10 == 0 ? "2" : "0");
    }
    flat.insert(flat.rfind('}'), ", \"hessian\": [" + values + "]");
    const MoleculeFile h = parse_molecule(flat);
    ASSERT_TRUE(h.hessian.has_value());
    EXPECT_EQ(h.hessian->rows(), 9);
    EXPECT_EQ((*h.hessian)(4, 4), 2.0);

    std::string both = with_modes;
    both.insert(both.rfind('}'), ", \"hessian\": [" + values + "]");
    EXPECT_NE(error_of(both).find("not both"), std::string::npos);
}

TEST(ParseTrajectory, ReadsFrames) {
    const Molecule mol = load_molecule(test::data_path("water.json")).molecule;
    const auto frames = load_trajectory(test::data_path("water_trajectory.xyz"), mol);
    ASSERT_EQ(frames.size(), 4u);
    EXPECT_EQ(frames[0].nuclear_positions.size(), 3u);
    EXPECT_EQ(frames[0].electron_positions.size(), 2u);
    EXPECT_EQ(frames[0].nuclear_positions[0], Vec3(-0.8561462919, -0.4185741839, -0.8934450506));
    EXPECT_EQ(frames[0].electron_momenta[1], Vec3(-0.0404418620, 0.0530449312, -0.0403767338));
}

TEST(ParseTrajectory, LineNumberedErrors) {
    const Molecule mol = parse_molecule(kWater).molecule;
    const auto error = [&](const std::string& text) {
        try {
            parse_trajectory(text, mol, "t.xyz");
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    const std::string good = "4\nc\nO 0 0 0 0 0 0\nH 1 0 0 0 0 0\nH 0 1 0 0 0 0\ne 0 0 1 0 0 0\n";
    EXPECT_EQ(error(good), "");
    EXPECT_NE(error("").find("no frames"), std::string::npos);
    EXPECT_NE(error("3\nc\n").find("t.xyz:1:"), std::string::npos) << error("3\nc\n");
    EXPECT_NE(error("4\nc\nO 0 0 0 0 0 0\n").find("truncated"), std::string::npos);
    EXPECT_NE(error("4\nc\nO 0 0 0 0 0 0\nH 1 0 0 0 0\nH 0 1 0 0 0 0\ne 0 0 1 0 0 0\n").find("t.xyz:4:"),
              std::string::npos);
    EXPECT_NE(error("4\nc\nO 0 0 0 0 0 0\nH 1 0 0 0 0 x\nH 0 1 0 0 0 0\ne 0 0 1 0 0 0\n").find("t.xyz:4:"),
              std::string::npos);
    EXPECT_NE(error("4\nc\ne 0 0 0 0 0 0\nH 1 0 0 0 0 0\nH 0 1 0 0 0 0\ne 0 0 1 0 0 0\n").find("electron"),
              std::string::npos);
    EXPECT_NE(error(good + "four\n").find("t.xyz:7:"), std::string::npos);
}

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1e-300), "1e-300");
    EXPECT_EQ(format_double(-2.0), "-2");
    std::mt19937_64 rng(70);
    std::normal_distribution<double> g(0.0, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = g(rng);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

TEST(FormatDouble, IgnoresLocale) {
    struct CommaDecimal : std::numpunct<char> {
        char do_decimal_point() const override { return ','; }
    };
    const std::locale previous = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
    EXPECT_EQ(format_double(1.5), "1.5");
    std::locale::global(previous);

    const std::string saved = std::setlocale(LC_NUMERIC, nullptr);
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
        EXPECT_EQ(format_double(1.5), "1.5");
        std::setlocale(LC_NUMERIC, saved.c_str());
    }
}

TEST(ToJson, SortedAndDeterministic) {
    const Report r = sample_report();
    const std::string a = to_json(r);
    EXPECT_EQ(a, to_json(r));
    const auto doc = nlohmann::json::parse(a);
    EXPECT_EQ(doc["command"], "frame");
    EXPECT_TRUE(doc["summary"]["missing"].is_null());
    EXPECT_EQ(doc["summary"]["alpha"], 3);
    EXPECT_EQ(doc["rows"][0]["Q"][1], -2.0);
    EXPECT_EQ(doc["rows"][1]["Q"][0], 1e-300);
    EXPECT_LT(a.find("\"alpha\""), a.find("\"missing\""));
    EXPECT_LT(a.find("\"missing\""), a.find("\"zeta\""));
}

TEST(ToJson, NonFiniteBecomesNull) {
    Report r;
    r.summary["nan"] = std::numeric_limits<double>::quiet_NaN();
    r.summary["inf"] = std::numeric_limits<double>::infinity();
    const auto doc = nlohmann::json::parse(to_json(r));
    EXPECT_TRUE(doc["summary"]["nan"].is_null());
    EXPECT_TRUE(doc["summary"]["inf"].is_null());
}

TEST(ToCsv, ExpandsVectorColumns) {
    const std::string csv = to_csv(sample_report());
    const std::string expected = "frame,Q_1,Q_2,passed,note\n"
                                 "0,0.1,-2,true,\"a,b\"\n"
                                 "1,1e-300,3,false,\n";
    EXPECT_EQ(csv, expected);
}

TEST(Table, RejectsRowWidthMismatch) {
    Table t;
    t.columns = {"a", "b"};
    EXPECT_THROW(t.add_row({1.0}), Error);
}
