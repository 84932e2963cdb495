#include "screenlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "screenlab/errors.hpp"

namespace screenlab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"dgp",
         {"kind", "n", "q", "alpha", "sigma_u", "p_complier", "p_always", "p_never", "beta_complier", "beta_always",
          "eps1", "eps2", "elicit_stated_types", "beta", "phi", "pi", "sigma_eta"}},
        {"scenario", {"mechanisms", "r_values", "population_sign", "sign_screen", "n_reps", "seed", "beta_target"}},
        {"diagnostics", {"test", "alpha", "n_boot"}},
        {"power", {"alpha", "power", "se", "pi_hat", "n", "sigma_u", "q", "r"}},
        {"output", {"dir", "format"}},
    };
    return keys;
}

const std::set<std::string> kDiscreteOnly{"p_complier", "p_always",  "p_never", "beta_complier",
                                          "beta_always", "eps1",     "eps2",    "elicit_stated_types"};
const std::set<std::string> kGaussianOnly{"beta", "phi", "pi", "sigma_eta"};

class SectionReader {
public:
    SectionReader(const ConfigSections& all, const std::string& name) {
        if (auto it = all.find(name); it != all.end()) entries_ = &it->second;
        name_ = name;
    }

    const ConfigEntry* find(const std::string& key) const {
        if (entries_ == nullptr) return nullptr;
        auto it = entries_->find(key);
        return it == entries_->end() ? nullptr : &it->second;
    }

    std::string where(const std::string& key) const {
        const auto* e = find(key);
        return "[" + name_ + "] " + key + (e ? " (line " + std::to_string(e->line) + ")" : "");
    }

    void real(const std::string& key, double& out) const {
        if (const auto* e = find(key)) out = parse_double(e->value, where(key));
    }
    void count(const std::string& key, std::size_t& out) const {
        if (const auto* e = find(key)) out = parse_count(e->value, where(key));
    }
    void flag(const std::string& key, bool& out) const {
        if (const auto* e = find(key)) out = parse_bool(e->value, where(key));
    }

private:
    const std::map<std::string, ConfigEntry>* entries_ = nullptr;
    std::string name_;
};

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
        fail(std::string(what) + ": '" + std::string(text) + "' is not a finite number");
    return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
    text = trim(text);
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        fail(std::string(what) + ": '" + std::string(text) + "' is not a non-negative integer");
    return v;
}

std::uint64_t parse_seed(std::string_view text, std::string_view what) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        fail(std::string(what) + ": '" + std::string(text) + "' is not an unsigned 64-bit seed");
    return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    fail(std::string(what) + ": '" + std::string(text) + "' is not a boolean");
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty()) out.emplace_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

ConfigSections parse_config_text(std::string_view text) {
    ConfigSections sections;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("line " + std::to_string(line_no) + ": malformed section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!allowed_keys().contains(current))
                fail("line " + std::to_string(line_no) + ": unknown section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("line " + std::to_string(line_no) + ": expected key = value");
        if (current.empty()) fail("line " + std::to_string(line_no) + ": key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!allowed_keys().at(current).contains(key))
            fail("line " + std::to_string(line_no) + ": unknown key '" + key + "' in [" + current + "]");
        auto& sec = sections[current];
        if (sec.contains(key)) fail("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        sec[key] = ConfigEntry{value, line_no};
    }
    return sections;
}

RunConfig build_run_config(const ConfigSections& sections) {
    RunConfig rc;
    const SectionReader dgp(sections, "dgp");
    const SectionReader scen(sections, "scenario");
    const SectionReader diag(sections, "diagnostics");
    const SectionReader pow(sections, "power");
    const SectionReader out(sections, "output");

    std::string kind = "discrete";
    if (const auto* e = dgp.find("kind")) kind = e->value;
    if (kind != "discrete" && kind != "gaussian") fail(dgp.where("kind") + ": must be discrete or gaussian");
    const bool gaussian = kind == "gaussian";
    if (auto it = sections.find("dgp"); it != sections.end()) {
        for (const auto& [key, entry] : it->second) {
            if (gaussian && kDiscreteOnly.contains(key))
                fail("line " + std::to_string(entry.line) + ": unknown key '" + key + "' for gaussian dgp");
            if (!gaussian && kGaussianOnly.contains(key))
                fail("line " + std::to_string(entry.line) + ": unknown key '" + key + "' for discrete dgp");
        }
    }
    if (gaussian && scen.find("mechanisms")) fail(scen.where("mechanisms") + ": gaussian scenarios use r_values");
    if (!gaussian && scen.find("r_values")) fail(scen.where("r_values") + ": discrete scenarios use mechanisms");

    Scenario& sc = rc.scenario;
    if (gaussian) {
        GaussianDgpConfig g;
        dgp.count("n", g.n);
        dgp.real("q", g.q);
        dgp.real("alpha", g.alpha);
        dgp.real("beta", g.beta);
        dgp.real("phi", g.phi);
        dgp.real("pi", g.pi);
        dgp.real("sigma_u", g.sigma_u);
        dgp.real("sigma_eta", g.sigma_eta);
        sc.dgp = g;
        rc.beta_target = g.beta;
        sc.population_sign = g.pi < 0.0 ? Sign::Negative : Sign::Positive;
        if (const auto* e = scen.find("r_values")) {
            sc.r_values.clear();
            for (const auto& item : split_list(e->value)) sc.r_values.push_back(parse_double(item, scen.where("r_values")));
        }
    } else {
        DiscreteDgpConfig d;
        dgp.count("n", d.n);
        dgp.real("q", d.q);
        dgp.real("alpha", d.alpha);
        dgp.real("sigma_u", d.sigma_u);
        dgp.real("p_complier", d.p_complier);
        dgp.real("p_always", d.p_always);
        dgp.real("p_never", d.p_never);
        dgp.real("beta_complier", d.beta_complier);
        dgp.real("beta_always", d.beta_always);
        dgp.real("eps1", d.eps1);
        dgp.real("eps2", d.eps2);
        dgp.flag("elicit_stated_types", d.elicit_stated_types);
        sc.dgp = d;
        rc.beta_target = d.beta_complier;
        if (const auto* e = scen.find("mechanisms")) {
            sc.mechanisms.clear();
            for (const auto& item : split_list(e->value)) sc.mechanisms.push_back(parse_mechanism(item));
        }
    }
    if (const auto* e = scen.find("population_sign")) {
        if (e->value == "+" || e->value == "positive")
            sc.population_sign = Sign::Positive;
        else if (e->value == "-" || e->value == "negative")
            sc.population_sign = Sign::Negative;
        else
            fail(scen.where("population_sign") + ": must be + or -");
    }
    scen.flag("sign_screen", sc.apply_sign_screen);
    scen.count("n_reps", sc.n_reps);
    if (const auto* e = scen.find("seed")) sc.base_seed = parse_seed(e->value, scen.where("seed"));
    scen.real("beta_target", rc.beta_target);

    if (const auto* e = diag.find("test")) {
        if (e->value == "retention")
            rc.diagnostic = Diagnostic::RetentionTest;
        else if (e->value == "tnr")
            rc.diagnostic = Diagnostic::TnrTest;
        else if (e->value != "none")
            fail(diag.where("test") + ": must be none, retention or tnr");
    }
    diag.real("alpha", rc.alpha);
    if (const auto* e = diag.find("n_boot")) {
        const auto nb = parse_count(e->value, diag.where("n_boot"));
        if (nb < 200 || nb > 1000000) fail(diag.where("n_boot") + ": must lie in [200, 1000000]");
        rc.n_boot = static_cast<int>(nb);
    }
    if (!(rc.alpha > 0.0 && rc.alpha < 0.5)) fail(diag.where("alpha") + ": must lie in (0, 0.5)");

    pow.real("alpha", rc.power.alpha);
    pow.real("power", rc.power.target_power);
    if (const auto* e = pow.find("se")) rc.power.se_unscreened = parse_double(e->value, pow.where("se"));
    if (pow.find("pi_hat") || pow.find("n")) {
        SeInputs in;
        pow.real("pi_hat", in.pi_hat);
        pow.count("n", in.n);
        pow.real("sigma_u", in.sigma_u);
        pow.real("q", in.q);
        rc.power.se_inputs = in;
    }
    if (const auto* e = pow.find("r"))
        for (const auto& item : split_list(e->value)) rc.power.r_candidates.push_back(parse_double(item, pow.where("r")));

    if (const auto* e = out.find("dir")) rc.out_dir = e->value;
    if (const auto* e = out.find("format")) {
        if (e->value == "csv")
            rc.format = TableFormat::Csv;
        else if (e->value == "json")
            rc.format = TableFormat::Json;
        else
            fail(out.where("format") + ": must be csv or json");
    }

    sc.validate();
    rc.power.validate();
    if (rc.diagnostic && gaussian) fail("[diagnostics] test needs a discrete dgp");
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return build_run_config(parse_config_text(buf.str()));
}

}  // namespace screenlab
