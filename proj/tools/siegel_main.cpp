#include "siegel/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using siegel::Rat;
using siegel::RunConfig;

struct EntryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// "a+bi" with either part optional: "2", "0+1i", "-1.5e-3i", "1-2i"
std::complex<double> parse_complex(const std::string& raw, int row, int col) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto fail = [&](const std::string& why) -> std::complex<double> {
        throw EntryError("entry (" + std::to_string(row) + "," + std::to_string(col) +
                         ") \"" + raw + "\": " + why);
    };
    if (s.empty()) return fail("empty");
    bool has_i = s.back() == 'i' || s.back() == 'I';
    std::size_t cut = std::string::npos;
    if (has_i) {
        s.pop_back();
        // split at the last sign that is not a leading sign or an exponent sign
        for (std::size_t k = s.size(); k-- > 1;) {
            if (s[k] != '+' && s[k] != '-') continue;
            char prev = s[k - 1];
            if (prev == 'e' || prev == 'E') continue;
            cut = k;
            break;
        }
    }
    try {
        if (!has_i) {
            std::size_t used = 0;
            double re = std::stod(s, &used);
            if (used != s.size()) return fail("trailing characters");
            return {re, 0.0};
        }
        if (cut == std::string::npos) {
            // pure imaginary
            if (s.empty() || s == "+" || s == "-") s += "1";
            std::size_t used = 0;
            double im = std::stod(s, &used);
            if (used != s.size()) return fail("trailing characters");
            return {0.0, im};
        }
        std::string re_part = s.substr(0, cut);
        std::string im_part = s.substr(cut);
        if (im_part == "+" || im_part == "-") im_part += "1";
        std::size_t used = 0;
        double re = std::stod(re_part, &used);
        if (used != re_part.size()) return fail("trailing characters in real part");
        double im = std::stod(im_part, &used);
        if (used != im_part.size()) return fail("trailing characters in imaginary part");
        return {re, im};
    } catch (const EntryError&) {
        throw;
    } catch (const std::invalid_argument&) {
        return fail("not a number");
    } catch (const std::out_of_range&) {
        return fail("out of range");
    }
}

siegel::SiegelPoint parse_point(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("Z is not valid JSON at byte ") +
                                    std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("Z must be a nonempty JSON array of rows");
    int g = static_cast<int>(j.size());
    Eigen::MatrixXcd Z(g, g);
    for (int r = 0; r < g; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != g)
            throw std::invalid_argument("row " + std::to_string(r + 1) + " must have " +
                                        std::to_string(g) + " entries");
        for (int c = 0; c < g; ++c) {
            const auto& cell = row[static_cast<std::size_t>(c)];
            if (cell.is_number())
                Z(r, c) = std::complex<double>(cell.get<double>(), 0.0);
            else if (cell.is_string())
                Z(r, c) = parse_complex(cell.get<std::string>(), r + 1, c + 1);
            else
                throw std::invalid_argument("entry (" + std::to_string(r + 1) + "," +
                                            std::to_string(c + 1) +
                                            ") must be a string or number");
        }
    }
    return siegel::make_siegel_point(Z);
}

void emit(const nlohmann::ordered_json& out, const std::string& json_out) {
    std::cout << out.dump(2) << "\n";
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        if (!f) throw std::runtime_error("cannot open " + json_out + " for writing");
        f << out.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta-constant machinery for Siegel modular functions"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the shared options after the subcommand too

    RunConfig cfg;
    if (const char* env = std::getenv("SIEGEL_EPS")) {
        char* end = nullptr;
        double e = std::strtod(env, &end);
        if (end != env && e > 0) cfg.epsilon = e;
    }
    std::string json_out;
    app.add_option("--genus", cfg.genus, "genus g")->check(CLI::Range(1, 6));
    app.add_option("--level", cfg.level, "level N")->check(CLI::PositiveNumber);
    app.add_option("--eps", cfg.epsilon, "target truncation accuracy")
        ->check(CLI::PositiveNumber);
    app.add_option("--samples", cfg.samples, "shared sample points per comparison")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed for all randomness");
    app.add_option("--radius-cap", cfg.radius_cap, "largest allowed summation radius")
        ->check(CLI::PositiveNumber);
    app.add_option("--cache", cfg.cache_path, "group table cache file");
    app.add_option("--json-out", json_out, "also write the JSON output to this file");

    std::string v_text, z_text, suite, target, index_set;

    CLI::App* c_theta = app.add_subcommand("theta", "evaluate one theta constant");
    c_theta->add_option("--v", v_text, "characteristic, comma-separated rationals")
        ->required();
    c_theta->add_option("--Z", z_text, "point of H_g, JSON rows of \"a+bi\" entries")
        ->required();

    CLI::App* c_btheta =
        app.add_subcommand("btheta", "evaluate the theta-constant quotient of a class");
    c_btheta->add_option("--v", v_text, "index vector, comma-separated rationals")
        ->required();
    c_btheta->add_option("--Z", z_text, "point of H_g, JSON rows of \"a+bi\" entries")
        ->required();

    CLI::App* c_verify = app.add_subcommand("verify", "run one identity suite");
    c_verify
        ->add_option("suite", suite,
                     "one of: vanishing, diag, genus1, action, invariance, orders")
        ->required();

    CLI::App* c_prim = app.add_subcommand(
        "primitivity", "pairwise separation of all index classes of the level");

    CLI::App* c_fibers =
        app.add_subcommand("fibers", "scan for classes sharing a target's quotient");
    c_fibers->add_option("target", target, "one of: f, e, e_1 .. e_{2g}")->required();

    CLI::App* c_stab =
        app.add_subcommand("stabilizer", "stabilizer of an index set in the mod-N group");
    c_stab->add_option("set", index_set, "full or gamma1-type")
        ->required()
        ->check(CLI::IsMember({"full", "gamma1-type"}));

    CLI::App* c_rescale = app.add_subcommand(
        "rescale", "invariance of Theta_v(NZ) under the lower congruence group");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_theta->parsed()) {
            siegel::FracVector v = siegel::parse_frac_vector(v_text);
            siegel::SiegelPoint Z = parse_point(z_text);
            if (v.dim() != 2 * Z.genus())
                throw std::invalid_argument("characteristic has dimension " +
                                            std::to_string(v.dim()) + ", expected " +
                                            std::to_string(2 * Z.genus()));
            siegel::ThetaValue t = siegel::theta(v, Z, cfg.epsilon, cfg.radius_cap);
            nlohmann::ordered_json out;
            out["command"] = "theta";
            out["v"] = siegel::to_string(v);
            out["value"] = siegel::format_complex(t.value);
            out["radius"] = t.radius;
            out["tail_bound"] = t.tail_bound;
            emit(out, json_out);
            return 0;
        }
        if (c_btheta->parsed()) {
            siegel::FracVector v = siegel::parse_frac_vector(v_text);
            siegel::SiegelPoint Z = parse_point(z_text);
            if (v.dim() != 2 * Z.genus())
                throw std::invalid_argument("index vector has dimension " +
                                            std::to_string(v.dim()) + ", expected " +
                                            std::to_string(2 * Z.genus()));
            siegel::IndexClass cls = siegel::canonical(v);
            siegel::LogValue lv =
                siegel::big_theta_log(cls, Z, cfg.epsilon, cfg.radius_cap);
            nlohmann::ordered_json out;
            out["command"] = "btheta";
            out["v"] = siegel::to_string(v);
            out["class"] = siegel::to_string(cls.rep);
            out["level"] = cls.level;
            out["log_magnitude"] = lv.log_magnitude;
            out["argument"] = lv.argument;
            if (std::abs(lv.log_magnitude) < 700.0) {
                std::complex<double> val =
                    std::exp(lv.log_magnitude) *
                    std::complex<double>(std::cos(lv.argument), std::sin(lv.argument));
                out["value"] = siegel::format_complex(val);
            } else {
                out["value"] = nullptr;  // magnitude outside double range
            }
            emit(out, json_out);
            return 0;
        }

        siegel::Report rep;
        if (c_verify->parsed())
            rep = siegel::run_suite(suite, cfg);
        else if (c_prim->parsed())
            rep = siegel::cmd_primitivity(cfg);
        else if (c_fibers->parsed())
            rep = siegel::cmd_fibers(target, cfg);
        else if (c_stab->parsed())
            rep = siegel::cmd_stabilizer(index_set, cfg);
        else if (c_rescale->parsed())
            rep = siegel::cmd_rescale_check(cfg);
        else
            throw std::logic_error("no subcommand dispatched");
        emit(rep.to_json(), json_out);
        return rep.pass() ? 0 : 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 1;
    }
}
