#include "fgs/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fgs/error.hpp"
#include "fgs/snapshot.hpp"

namespace fgs {

namespace {

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

using Table = std::map<std::string, Entry>;   // key "section.name"

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Table tokenize(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // strip comments introduced by '#' at start or after whitespace
        std::string line = raw;
        for (std::size_t p = 0; p < line.size(); ++p) {
            if (line[p] == '#' && (p == 0 || line[p - 1] == ' ' || line[p - 1] == '\t')) {
                line.resize(p);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header '" + line + "'", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        if (section.empty())
            throw ConfigError("key '" + key + "' appears before any [section]", line_no);
        const std::string full = section + "." + key;
        if (table.count(full))
            throw ConfigError("duplicate key '" + full + "' (first set on line " +
                                  std::to_string(table[full].line) + ")",
                              line_no);
        table[full] = Entry{value, line_no};
    }
    return table;
}

class Reader {
public:
    explicit Reader(Table table) : table_(std::move(table)) {}

    bool has(const std::string& key) const { return table_.count(key) > 0; }

    std::string get_string(const std::string& key) {
        auto it = table_.find(key);
        if (it == table_.end()) throw ConfigError("missing required field '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }

    double get_double(const std::string& key) {
        const std::string v = get_string(key);
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("field '" + key + "': expected a number, got '" + v + "'",
                              line_of(key));
        }
    }

    double get_double(const std::string& key, double fallback) {
        return has(key) ? get_double(key) : fallback;
    }

    std::size_t get_count(const std::string& key) {
        const double d = get_double(key);
        if (d < 0 || d != std::floor(d))
            throw ConfigError("field '" + key + "': expected a nonnegative integer",
                              line_of(key));
        return static_cast<std::size_t>(d);
    }

    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = get_string(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError("field '" + key + "': expected true/false, got '" + v + "'",
                          line_of(key));
    }

    std::vector<double> get_list(const std::string& key) {
        const std::string v = get_string(key);
        std::vector<double> out;
        std::istringstream in(v);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("field '" + key + "': bad list entry '" + item + "'",
                                  line_of(key));
            }
        }
        return out;
    }

    int line_of(const std::string& key) const {
        auto it = table_.find(key);
        return it == table_.end() ? 0 : it->second.line;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : table_)
            if (!entry.used)
                throw ConfigError("unknown key '" + key + "'", entry.line);
    }

private:
    Table table_;
};

} // namespace

SimulationConfig parse_config(const std::string& text) {
    Reader r(tokenize(text));

    const double alpha = r.get_double("model.alpha");
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw ConfigError("field 'model.alpha': must lie in (1, 2], got " +
                              std::to_string(alpha),
                          r.line_of("model.alpha"));
    ModelParams params(FractionalOrder(alpha), r.get_double("model.mu_u"),
                       r.get_double("model.mu_v"), r.get_double("model.F"),
                       r.get_double("model.kappa"));

    Domain2D domain(r.get_double("domain.a"), r.get_double("domain.b"),
                    r.get_double("domain.c"), r.get_double("domain.d"),
                    r.get_count("domain.nx"), r.get_count("domain.ny"));

    const double tau = r.get_double("time.tau");
    std::size_t steps;
    if (r.has("time.steps")) {
        steps = r.get_count("time.steps");
        if (r.has("time.t_end"))
            throw ConfigError("give either 'time.steps' or 'time.t_end', not both",
                              r.line_of("time.t_end"));
    } else if (r.has("time.t_end")) {
        const double t_end = r.get_double("time.t_end");
        const double m = t_end / tau;
        steps = static_cast<std::size_t>(std::llround(m));
        if (steps < 1 || std::abs(static_cast<double>(steps) * tau - t_end) >
                             1e-9 * std::max(1.0, t_end))
            throw ConfigError("field 'time.t_end': not an integer multiple of tau",
                              r.line_of("time.t_end"));
    } else {
        throw ConfigError("missing required field 'time.steps' or 'time.t_end'");
    }
    TimeGrid time(tau, steps);

    SimulationConfig cfg(params, domain, time);

    const std::string kind = r.has("initial.kind") ? r.get_string("initial.kind") : "uniform";
    if (kind == "uniform") {
        cfg.initial.kind = InitialSpec::Kind::Uniform;
        cfg.initial.uniform_u = r.get_double("initial.u", 1.0);
        cfg.initial.uniform_v = r.get_double("initial.v", 0.0);
    } else if (kind == "disk") {
        cfg.initial.kind = InitialSpec::Kind::Disk;
        cfg.initial.background_u = r.get_double("initial.background_u", 1.0);
        cfg.initial.background_v = r.get_double("initial.background_v", 0.0);
        cfg.initial.center_x = r.get_double("initial.center_x");
        cfg.initial.center_y = r.get_double("initial.center_y");
        cfg.initial.radius = r.get_double("initial.radius");
        if (!(cfg.initial.radius > 0.0))
            throw ConfigError("field 'initial.radius': must be positive",
                              r.line_of("initial.radius"));
        cfg.initial.inner_u = r.get_double("initial.inner_u");
        cfg.initial.inner_v = r.get_double("initial.inner_v");
    } else if (kind == "file") {
        cfg.initial.kind = InitialSpec::Kind::File;
        cfg.initial.path = r.get_string("initial.path");
    } else {
        throw ConfigError("field 'initial.kind': expected uniform/disk/file, got '" + kind +
                              "'",
                          r.line_of("initial.kind"));
    }

    cfg.output_dir = r.has("output.directory") ? r.get_string("output.directory") : "out";
    cfg.diag_stride = r.has("output.diag_stride") ? r.get_count("output.diag_stride") : 50;
    if (cfg.diag_stride == 0)
        throw ConfigError("field 'output.diag_stride': must be >= 1",
                          r.line_of("output.diag_stride"));

    const double horizon = time.horizon();
    if (r.has("output.snapshot_times") && r.has("output.snapshot_stride"))
        throw ConfigError("give either 'output.snapshot_times' or 'output.snapshot_stride'",
                          r.line_of("output.snapshot_stride"));
    if (r.has("output.snapshot_times")) {
        cfg.snapshot_times = r.get_list("output.snapshot_times");
    } else if (r.has("output.snapshot_stride")) {
        const std::size_t stride = r.get_count("output.snapshot_stride");
        if (stride == 0)
            throw ConfigError("field 'output.snapshot_stride': must be >= 1",
                              r.line_of("output.snapshot_stride"));
        for (std::size_t s = stride; s <= time.steps; s += stride)
            cfg.snapshot_times.push_back(static_cast<double>(s) * tau);
    } else {
        cfg.snapshot_times = {horizon};
    }
    for (double& t : cfg.snapshot_times) {
        if (t < 0.0 || t > horizon * (1.0 + 1e-12))
            throw ConfigError("field 'output.snapshot_times': time " + std::to_string(t) +
                                  " outside [0, " + std::to_string(horizon) + "]",
                              r.line_of("output.snapshot_times"));
        const auto k = static_cast<std::size_t>(std::llround(t / tau));
        if (std::abs(static_cast<double>(k) * tau - t) > 1e-9 * std::max(1.0, horizon))
            throw ConfigError("field 'output.snapshot_times': time " + std::to_string(t) +
                                  " is not on the step grid",
                              r.line_of("output.snapshot_times"));
        t = static_cast<double>(k) * tau;   // canonical value
    }

    if (r.has("solver.method")) {
        const std::string m = r.get_string("solver.method");
        if (m == "primary")
            cfg.method = SolverMethod::Primary;
        else if (m == "cross")
            cfg.method = SolverMethod::Cross;
        else
            throw ConfigError("field 'solver.method': expected primary/cross, got '" + m + "'",
                              r.line_of("solver.method"));
    }
    cfg.picard_tol = r.get_double("solver.picard_tol", 1e-12);
    cfg.picard_cap = static_cast<int>(r.has("solver.picard_cap")
                                          ? r.get_count("solver.picard_cap")
                                          : 8);
    if (cfg.picard_cap < 1)
        throw ConfigError("field 'solver.picard_cap': must be >= 1",
                          r.line_of("solver.picard_cap"));
    cfg.strict_bounds = r.get_bool("solver.strict_bounds", false);

    r.reject_unused();
    return cfg;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const SimulationConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "[model]\n";
    out << "alpha = " << cfg.params.alpha() << "\n";
    out << "mu_u = " << cfg.params.mu_u() << "\n";
    out << "mu_v = " << cfg.params.mu_v() << "\n";
    out << "F = " << cfg.params.feed() << "\n";
    out << "kappa = " << cfg.params.decay() << "\n\n";
    out << "[domain]\n";
    out << "a = " << cfg.domain.a() << "\n";
    out << "b = " << cfg.domain.b() << "\n";
    out << "c = " << cfg.domain.c() << "\n";
    out << "d = " << cfg.domain.d() << "\n";
    out << "nx = " << cfg.domain.nx() << "\n";
    out << "ny = " << cfg.domain.ny() << "\n\n";
    out << "[time]\n";
    out << "tau = " << cfg.time.tau << "\n";
    out << "steps = " << cfg.time.steps << "\n\n";
    out << "[initial]\n";
    switch (cfg.initial.kind) {
        case InitialSpec::Kind::Uniform:
            out << "kind = uniform\n";
            out << "u = " << cfg.initial.uniform_u << "\n";
            out << "v = " << cfg.initial.uniform_v << "\n";
            break;
        case InitialSpec::Kind::Disk:
            out << "kind = disk\n";
            out << "background_u = " << cfg.initial.background_u << "\n";
            out << "background_v = " << cfg.initial.background_v << "\n";
            out << "center_x = " << cfg.initial.center_x << "\n";
            out << "center_y = " << cfg.initial.center_y << "\n";
            out << "radius = " << cfg.initial.radius << "\n";
            out << "inner_u = " << cfg.initial.inner_u << "\n";
            out << "inner_v = " << cfg.initial.inner_v << "\n";
            break;
        case InitialSpec::Kind::File:
            out << "kind = file\n";
            out << "path = " << cfg.initial.path << "\n";
            break;
    }
    out << "\n[output]\n";
    out << "directory = " << cfg.output_dir << "\n";
    out << "diag_stride = " << cfg.diag_stride << "\n";
    out << "snapshot_times = ";
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
        out << (i ? ", " : "") << cfg.snapshot_times[i];
    out << "\n\n[solver]\n";
    out << "method = " << (cfg.method == SolverMethod::Primary ? "primary" : "cross") << "\n";
    out << "picard_tol = " << cfg.picard_tol << "\n";
    out << "picard_cap = " << cfg.picard_cap << "\n";
    out << "strict_bounds = " << (cfg.strict_bounds ? "true" : "false") << "\n";
    return out.str();
}

FieldPair build_initial_state(const SimulationConfig& cfg) {
    const std::size_t rows = cfg.domain.interior_x();
    const std::size_t cols = cfg.domain.interior_y();
    FieldPair state;
    switch (cfg.initial.kind) {
        case InitialSpec::Kind::Uniform:
            state.u = Field(rows, cols, cfg.initial.uniform_u);
            state.v = Field(rows, cols, cfg.initial.uniform_v);
            break;
        case InitialSpec::Kind::Disk: {
            state.u = Field(rows, cols, cfg.initial.background_u);
            state.v = Field(rows, cols, cfg.initial.background_v);
            const double r2 = cfg.initial.radius * cfg.initial.radius;
            for (std::size_t i = 0; i < rows; ++i) {
                const double dx = cfg.domain.x(i + 1) - cfg.initial.center_x;
                for (std::size_t j = 0; j < cols; ++j) {
                    const double dy = cfg.domain.y(j + 1) - cfg.initial.center_y;
                    if (dx * dx + dy * dy <= r2) {
                        state.u(i, j) = cfg.initial.inner_u;
                        state.v(i, j) = cfg.initial.inner_v;
                    }
                }
            }
            break;
        }
        case InitialSpec::Kind::File: {
            Snapshot snap = read_snapshot(cfg.initial.path);
            if (snap.state.u.rows != rows || snap.state.u.cols != cols)
                throw ConfigError("initial.path: snapshot grid " +
                                  std::to_string(snap.state.u.rows + 1) + "x" +
                                  std::to_string(snap.state.u.cols + 1) +
                                  " does not match the configured domain");
            state = std::move(snap.state);
            break;
        }
    }
    return state;
}

} // namespace fgs
