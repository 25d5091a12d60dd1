#include "scalarmc/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace scalarmc {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where, what);
}

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail(where + "." + key, "unknown key");
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<std::int64_t>();
}

std::uint64_t as_seed(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !j.is_number_integer()) fail(where, "expected an integer seed");
    if (j.is_number_integer() && j.get<std::int64_t>() < 0) fail(where, "seed must be >= 0");
    return j.get<std::uint64_t>();
}

double number_or(const json& obj, const char* key, const std::string& where, double fallback) {
    const json* j = find(obj, key);
    return j ? as_number(*j, where + "." + key) : fallback;
}

std::int64_t integer_or(const json& obj, const char* key, const std::string& where,
                        std::int64_t fallback) {
    const json* j = find(obj, key);
    return j ? as_integer(*j, where + "." + key) : fallback;
}

Vec2 as_vec2(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "expected [x1, x2]");
    return {as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]")};
}

std::vector<double> as_number_list(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

VelocityField parse_velocity(const json& j, const std::string& where) {
    expect_object(j, where);
    const json* kind = find(j, "kind");
    if (!kind || !kind->is_string()) fail(where + ".kind", "expected \"constant\" or \"fourier\"");
    const std::string k = kind->get<std::string>();
    if (k == "constant") {
        reject_unknown_keys(j, where, {"kind", "value"});
        const json* value = find(j, "value");
        if (!value) fail(where + ".value", "missing");
        return VelocityField::constant(as_vec2(*value, where + ".value"));
    }
    if (k == "fourier") {
        reject_unknown_keys(j, where, {"kind", "max_wavenumber", "modes"});
        const json* maxk = find(j, "max_wavenumber");
        const json* modes = find(j, "modes");
        if (!maxk) fail(where + ".max_wavenumber", "missing");
        if (!modes || !modes->is_array()) fail(where + ".modes", "expected an array");
        std::vector<VelocityMode> vm;
        for (std::size_t i = 0; i < modes->size(); ++i) {
            const std::string mw = where + ".modes[" + std::to_string(i) + "]";
            const json& m = (*modes)[i];
            if (!m.is_array() || m.size() != 4) fail(mw, "expected [k1, k2, re, im]");
            vm.push_back({static_cast<int>(as_integer(m[0], mw + "[0]")),
                          static_cast<int>(as_integer(m[1], mw + "[1]")),
                          {as_number(m[2], mw + "[2]"), as_number(m[3], mw + "[3]")}});
        }
        try {
            return VelocityField::fourier(FourierVelocityField(
                std::move(vm), static_cast<int>(as_integer(*maxk, where + ".max_wavenumber"))));
        } catch (const std::exception& e) {
            fail(where, e.what());
        }
    }
    fail(where + ".kind", "unknown velocity kind \"" + k + "\"");
}

json velocity_to_json(const VelocityField& v) {
    json j;
    if (v.is_constant()) {
        j["kind"] = "constant";
        j["value"] = {v.constant_value().x1, v.constant_value().x2};
    } else {
        j["kind"] = "fourier";
        j["max_wavenumber"] = v.fourier_field().max_wavenumber();
        json modes = json::array();
        for (const auto& m : v.fourier_field().modes())
            modes.push_back({m.k1, m.k2, m.coeff.real(), m.coeff.imag()});
        j["modes"] = std::move(modes);
    }
    return j;
}

ScalarField parse_scalar_field(const json& j, const std::string& where) {
    expect_object(j, where);
    const json* kind = find(j, "kind");
    if (!kind || !kind->is_string())
        fail(where + ".kind", "expected \"constant\", \"cosine\", \"bumps\" or \"linear\"");
    const std::string k = kind->get<std::string>();
    if (k == "constant") {
        reject_unknown_keys(j, where, {"kind", "value"});
        const json* value = find(j, "value");
        if (!value) fail(where + ".value", "missing");
        return ScalarField::constant(as_number(*value, where + ".value"));
    }
    if (k == "cosine") {
        reject_unknown_keys(j, where, {"kind", "terms"});
        const json* terms = find(j, "terms");
        if (!terms || !terms->is_array()) fail(where + ".terms", "expected an array");
        std::vector<ScalarField::CosineTerm> out;
        for (std::size_t i = 0; i < terms->size(); ++i) {
            const std::string tw = where + ".terms[" + std::to_string(i) + "]";
            const json& t = (*terms)[i];
            expect_object(t, tw);
            reject_unknown_keys(t, tw, {"amplitude", "phase", "k", "freq"});
            ScalarField::CosineTerm term;
            term.amplitude = number_or(t, "amplitude", tw, 1.0);
            term.phase = number_or(t, "phase", tw, 0.0);
            const json* kv = find(t, "k");
            const json* fv = find(t, "freq");
            if ((kv == nullptr) == (fv == nullptr))
                fail(tw, "give exactly one of \"k\" (integer torus mode) or \"freq\" (radians)");
            if (kv) {
                const Vec2 ki = as_vec2(*kv, tw + ".k");
                term.freq = {kTwoPi * ki.x1, kTwoPi * ki.x2};
            } else {
                term.freq = as_vec2(*fv, tw + ".freq");
            }
            out.push_back(term);
        }
        return ScalarField::cosine_series(std::move(out));
    }
    if (k == "linear") {
        reject_unknown_keys(j, where, {"kind", "offset", "gradient"});
        const json* gradient = find(j, "gradient");
        if (!gradient) fail(where + ".gradient", "missing");
        return ScalarField::affine(number_or(j, "offset", where, 0.0),
                                   as_vec2(*gradient, where + ".gradient"));
    }
    if (k == "bumps") {
        reject_unknown_keys(j, where, {"kind", "amplitudes", "centers", "sharpness"});
        const json* amps = find(j, "amplitudes");
        const json* centers = find(j, "centers");
        if (!amps) fail(where + ".amplitudes", "missing");
        if (!centers || !centers->is_array()) fail(where + ".centers", "expected an array");
        const auto amplitudes = as_number_list(*amps, where + ".amplitudes");
        if (amplitudes.size() != centers->size())
            fail(where, "amplitudes and centers must have equal length");
        std::vector<ScalarField::Bump> bumps;
        for (std::size_t i = 0; i < centers->size(); ++i)
            bumps.push_back({amplitudes[i],
                             as_vec2((*centers)[i], where + ".centers[" + std::to_string(i) + "]")});
        return ScalarField::gaussian_bumps(std::move(bumps),
                                           number_or(j, "sharpness", where, 4.0));
    }
    fail(where + ".kind", "unknown scalar field kind \"" + k + "\"");
}

json scalar_field_to_json(const ScalarField& f) {
    json j;
    switch (f.kind()) {
        case ScalarField::Kind::constant:
            j["kind"] = "constant";
            j["value"] = f.constant_value();
            break;
        case ScalarField::Kind::cosine: {
            j["kind"] = "cosine";
            json terms = json::array();
            for (const auto& t : f.cosine_terms()) {
                json term;
                term["amplitude"] = t.amplitude;
                term["freq"] = {t.freq.x1, t.freq.x2};
                term["phase"] = t.phase;
                terms.push_back(std::move(term));
            }
            j["terms"] = std::move(terms);
            break;
        }
        case ScalarField::Kind::bumps: {
            j["kind"] = "bumps";
            json amps = json::array();
            json centers = json::array();
            for (const auto& b : f.bumps()) {
                amps.push_back(b.amplitude);
                centers.push_back({b.center.x1, b.center.x2});
            }
            j["amplitudes"] = std::move(amps);
            j["centers"] = std::move(centers);
            j["sharpness"] = f.sharpness();
            break;
        }
        case ScalarField::Kind::linear:
            j["kind"] = "linear";
            j["offset"] = f.constant_value();
            j["gradient"] = {f.gradient().x1, f.gradient().x2};
            break;
    }
    return j;
}

Domain parse_domain(const json& j, const std::string& where) {
    expect_object(j, where);
    const json* kind = find(j, "kind");
    if (!kind || !kind->is_string())
        fail(where + ".kind", "expected \"torus\", \"box\" or \"disk\"");
    const std::string k = kind->get<std::string>();
    try {
        if (k == "torus") {
            reject_unknown_keys(j, where, {"kind"});
            return Domain::unit_torus();
        }
        if (k == "box") {
            reject_unknown_keys(j, where, {"kind", "lower", "upper"});
            const json* lower = find(j, "lower");
            const json* upper = find(j, "upper");
            if (!lower || !upper) fail(where, "box needs \"lower\" and \"upper\"");
            return Domain::box(as_vec2(*lower, where + ".lower"),
                               as_vec2(*upper, where + ".upper"));
        }
        if (k == "disk") {
            reject_unknown_keys(j, where, {"kind", "center", "radius"});
            const json* center = find(j, "center");
            const json* radius = find(j, "radius");
            if (!center || !radius) fail(where, "disk needs \"center\" and \"radius\"");
            return Domain::disk(as_vec2(*center, where + ".center"),
                                as_number(*radius, where + ".radius"));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    fail(where + ".kind", "unknown domain kind \"" + k + "\"");
}

json domain_to_json(const Domain& d) {
    json j;
    if (d.is_periodic()) {
        j["kind"] = "torus";
    } else if (const auto* b = d.as_box()) {
        j["kind"] = "box";
        j["lower"] = {b->lower.x1, b->lower.x2};
        j["upper"] = {b->upper.x1, b->upper.x2};
    } else if (const auto* k = d.as_disk()) {
        j["kind"] = "disk";
        j["center"] = {k->center.x1, k->center.x2};
        j["radius"] = k->radius;
    }
    return j;
}

StepScheme parse_scheme(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected \"euler-maruyama\" or \"milstein\"");
    const std::string s = j.get<std::string>();
    if (s == "euler-maruyama") return StepScheme::euler_maruyama;
    if (s == "milstein") return StepScheme::milstein;
    fail(where, "unknown scheme \"" + s + "\"");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line/column for the diagnostic.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream where;
        where << origin << ":" << line << ":" << col;
        fail(where.str(), e.what());
    }
    expect_object(root, origin);
    reject_unknown_keys(root, origin,
                        {"problem", "velocity", "diffusion", "initial_condition", "forcing",
                         "boundary", "domain", "observations", "particles", "dt", "scheme",
                         "max_steps", "seed", "workers", "prior", "likelihood", "mcmc",
                         "optimize", "reference", "benchmark"});

    RunConfig cfg;
    const json* problem = find(root, "problem");
    if (!problem || !problem->is_string()) fail(origin + ".problem", "expected \"ad\" or \"bvp\"");
    const std::string pk = problem->get<std::string>();
    if (pk == "ad")
        cfg.problem = ProblemKind::ad;
    else if (pk == "bvp")
        cfg.problem = ProblemKind::bvp;
    else
        fail(origin + ".problem", "unknown problem kind \"" + pk + "\"");

    if (const json* v = find(root, "velocity")) cfg.velocity = parse_velocity(*v, origin + ".velocity");
    if (const json* d = find(root, "diffusion")) {
        expect_object(*d, origin + ".diffusion");
        reject_unknown_keys(*d, origin + ".diffusion", {"kappa"});
        cfg.kappa = number_or(*d, "kappa", origin + ".diffusion", 0.0);
        if (cfg.kappa < 0.0) fail(origin + ".diffusion.kappa", "must be >= 0");
    }
    if (const json* f = find(root, "initial_condition"))
        cfg.initial_condition = parse_scalar_field(*f, origin + ".initial_condition");
    if (const json* f = find(root, "forcing")) cfg.forcing = parse_scalar_field(*f, origin + ".forcing");
    if (const json* f = find(root, "boundary"))
        cfg.boundary_data = parse_scalar_field(*f, origin + ".boundary");
    if (const json* d = find(root, "domain")) cfg.domain = parse_domain(*d, origin + ".domain");

    if (const json* obs = find(root, "observations")) {
        if (!obs->is_array()) fail(origin + ".observations", "expected an array");
        for (std::size_t i = 0; i < obs->size(); ++i) {
            const std::string ow = origin + ".observations[" + std::to_string(i) + "]";
            const json& o = (*obs)[i];
            expect_object(o, ow);
            if (cfg.problem == ProblemKind::ad) {
                reject_unknown_keys(o, ow, {"t", "x"});
                const json* t = find(o, "t");
                const json* x = find(o, "x");
                if (!t || !x) fail(ow, "observation needs \"t\" and \"x\"");
                cfg.ad_observations.push_back(
                    {as_number(*t, ow + ".t"), as_vec2(*x, ow + ".x")});
            } else {
                reject_unknown_keys(o, ow, {"x"});
                const json* x = find(o, "x");
                if (!x) fail(ow, "observation needs \"x\"");
                cfg.bvp_observations.push_back(as_vec2(*x, ow + ".x"));
            }
        }
    }

    cfg.particles = integer_or(root, "particles", origin, cfg.particles);
    cfg.dt = number_or(root, "dt", origin, cfg.dt);
    if (const json* s = find(root, "scheme")) cfg.scheme = parse_scheme(*s, origin + ".scheme");
    cfg.max_steps = integer_or(root, "max_steps", origin, cfg.max_steps);
    if (const json* s = find(root, "seed")) cfg.seed = as_seed(*s, origin + ".seed");
    cfg.workers = static_cast<int>(integer_or(root, "workers", origin, cfg.workers));

    if (const json* p = find(root, "prior")) {
        const std::string pw = origin + ".prior";
        expect_object(*p, pw);
        reject_unknown_keys(*p, pw, {"cutoff", "s0", "alpha"});
        PriorSpec prior;
        prior.cutoff = static_cast<int>(integer_or(*p, "cutoff", pw, 8));
        prior.s0 = number_or(*p, "s0", pw, 1.0);
        prior.alpha = number_or(*p, "alpha", pw, 2.5);
        try {
            prior.validate();
        } catch (const std::exception& e) {
            fail(pw, e.what());
        }
        cfg.prior = prior;
    }
    if (const json* l = find(root, "likelihood")) {
        const std::string lw = origin + ".likelihood";
        expect_object(*l, lw);
        reject_unknown_keys(*l, lw, {"data", "noise_std", "forward_seed"});
        LikelihoodSection like;
        const json* data = find(*l, "data");
        if (!data) fail(lw + ".data", "missing");
        like.data = as_number_list(*data, lw + ".data");
        like.noise_std = number_or(*l, "noise_std", lw, -1.0);
        if (const json* fs = find(*l, "forward_seed"))
            like.forward_seed = as_seed(*fs, lw + ".forward_seed");
        cfg.likelihood = std::move(like);
    }
    if (const json* m = find(root, "mcmc")) {
        const std::string mw = origin + ".mcmc";
        expect_object(*m, mw);
        reject_unknown_keys(*m, mw, {"steps", "beta", "burn_in", "thin"});
        McmcSection mc;
        mc.steps = integer_or(*m, "steps", mw, mc.steps);
        mc.beta = number_or(*m, "beta", mw, mc.beta);
        mc.burn_in = integer_or(*m, "burn_in", mw, mc.burn_in);
        mc.thin = integer_or(*m, "thin", mw, mc.thin);
        if (!(mc.beta > 0.0 && mc.beta <= 1.0)) fail(mw + ".beta", "must be in (0, 1]");
        cfg.mcmc = mc;
    }
    if (const json* o = find(root, "optimize")) {
        const std::string ow = origin + ".optimize";
        expect_object(*o, ow);
        reject_unknown_keys(*o, ow,
                            {"centers", "sharpness", "target", "initial", "x_tol", "f_tol",
                             "max_iter", "initial_step"});
        OptimizeSection opt;
        const json* centers = find(*o, "centers");
        if (!centers || !centers->is_array()) fail(ow + ".centers", "expected an array");
        for (std::size_t i = 0; i < centers->size(); ++i)
            opt.centers.push_back(
                as_vec2((*centers)[i], ow + ".centers[" + std::to_string(i) + "]"));
        opt.sharpness = number_or(*o, "sharpness", ow, 4.0);
        if (const json* t = find(*o, "target")) opt.target = as_number_list(*t, ow + ".target");
        if (const json* t = find(*o, "initial")) opt.initial = as_number_list(*t, ow + ".initial");
        if (opt.initial.empty()) opt.initial.assign(opt.centers.size(), 0.0);
        opt.options.x_tol = number_or(*o, "x_tol", ow, opt.options.x_tol);
        opt.options.f_tol = number_or(*o, "f_tol", ow, opt.options.f_tol);
        opt.options.max_iter = static_cast<int>(integer_or(*o, "max_iter", ow, opt.options.max_iter));
        opt.options.initial_step = number_or(*o, "initial_step", ow, opt.options.initial_step);
        cfg.optimize = std::move(opt);
    }
    if (const json* r = find(root, "reference")) {
        const std::string rw = origin + ".reference";
        expect_object(*r, rw);
        reject_unknown_keys(*r, rw, {"galerkin_cutoff", "dt_ref", "fd_grid", "field_grid"});
        ReferenceSection ref;
        ref.galerkin_cutoff = static_cast<int>(integer_or(*r, "galerkin_cutoff", rw, 16));
        ref.dt_ref = number_or(*r, "dt_ref", rw, -1.0);
        ref.fd_grid = static_cast<int>(integer_or(*r, "fd_grid", rw, 257));
        ref.field_grid = static_cast<int>(integer_or(*r, "field_grid", rw, 101));
        cfg.reference = ref;
    }
    if (const json* b = find(root, "benchmark")) {
        const std::string bw = origin + ".benchmark";
        expect_object(*b, bw);
        reject_unknown_keys(*b, bw,
                            {"cutoffs", "repetitions", "particles", "observations", "t_final",
                             "dt", "kappa", "s0", "alpha", "run_reference"});
        BenchmarkSection bench;
        if (const json* c = find(*b, "cutoffs")) {
            if (!c->is_array()) fail(bw + ".cutoffs", "expected an array");
            bench.config.cutoffs.clear();
            for (std::size_t i = 0; i < c->size(); ++i)
                bench.config.cutoffs.push_back(static_cast<int>(
                    as_integer((*c)[i], bw + ".cutoffs[" + std::to_string(i) + "]")));
        }
        bench.config.repetitions =
            static_cast<int>(integer_or(*b, "repetitions", bw, bench.config.repetitions));
        bench.config.n_particles = integer_or(*b, "particles", bw, bench.config.n_particles);
        bench.config.n_observations =
            static_cast<int>(integer_or(*b, "observations", bw, bench.config.n_observations));
        bench.config.t_final = number_or(*b, "t_final", bw, bench.config.t_final);
        bench.config.dt = number_or(*b, "dt", bw, bench.config.dt);
        bench.config.kappa = number_or(*b, "kappa", bw, bench.config.kappa);
        bench.config.prior_s0 = number_or(*b, "s0", bw, bench.config.prior_s0);
        bench.config.prior_alpha = number_or(*b, "alpha", bw, bench.config.prior_alpha);
        if (const json* rr = find(*b, "run_reference")) {
            if (!rr->is_boolean()) fail(bw + ".run_reference", "expected a boolean");
            bench.config.run_reference = rr->get<bool>();
        }
        cfg.benchmark = bench;
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["problem"] = cfg.problem == ProblemKind::ad ? "ad" : "bvp";
    root["velocity"] = velocity_to_json(cfg.velocity);
    root["diffusion"] = {{"kappa", cfg.kappa}};
    if (cfg.problem == ProblemKind::ad) {
        root["initial_condition"] = scalar_field_to_json(cfg.initial_condition);
        json obs = json::array();
        for (const auto& o : cfg.ad_observations)
            obs.push_back({{"t", o.t}, {"x", {o.x.x1, o.x.x2}}});
        root["observations"] = std::move(obs);
    } else {
        root["forcing"] = scalar_field_to_json(cfg.forcing);
        root["boundary"] = scalar_field_to_json(cfg.boundary_data);
        root["domain"] = domain_to_json(cfg.domain);
        json obs = json::array();
        for (const auto& x : cfg.bvp_observations) obs.push_back({{"x", {x.x1, x.x2}}});
        root["observations"] = std::move(obs);
        root["max_steps"] = cfg.max_steps;
    }
    root["particles"] = cfg.particles;
    if (cfg.dt > 0.0) root["dt"] = cfg.dt;
    root["scheme"] = cfg.scheme == StepScheme::euler_maruyama ? "euler-maruyama" : "milstein";
    root["seed"] = cfg.seed;
    root["workers"] = cfg.workers;
    if (cfg.prior)
        root["prior"] = {{"cutoff", cfg.prior->cutoff}, {"s0", cfg.prior->s0},
                         {"alpha", cfg.prior->alpha}};
    if (cfg.likelihood) {
        json l;
        l["data"] = cfg.likelihood->data;
        if (cfg.likelihood->noise_std > 0.0) l["noise_std"] = cfg.likelihood->noise_std;
        l["forward_seed"] = cfg.likelihood->forward_seed;
        root["likelihood"] = std::move(l);
    }
    if (cfg.mcmc)
        root["mcmc"] = {{"steps", cfg.mcmc->steps}, {"beta", cfg.mcmc->beta},
                        {"burn_in", cfg.mcmc->burn_in}, {"thin", cfg.mcmc->thin}};
    if (cfg.optimize) {
        json o;
        json centers = json::array();
        for (const auto& c : cfg.optimize->centers) centers.push_back({c.x1, c.x2});
        o["centers"] = std::move(centers);
        o["sharpness"] = cfg.optimize->sharpness;
        o["target"] = cfg.optimize->target;
        o["initial"] = cfg.optimize->initial;
        o["x_tol"] = cfg.optimize->options.x_tol;
        o["f_tol"] = cfg.optimize->options.f_tol;
        o["max_iter"] = cfg.optimize->options.max_iter;
        o["initial_step"] = cfg.optimize->options.initial_step;
        root["optimize"] = std::move(o);
    }
    if (cfg.reference) {
        json r;
        r["galerkin_cutoff"] = cfg.reference->galerkin_cutoff;
        if (cfg.reference->dt_ref > 0.0) r["dt_ref"] = cfg.reference->dt_ref;
        r["fd_grid"] = cfg.reference->fd_grid;
        r["field_grid"] = cfg.reference->field_grid;
        root["reference"] = std::move(r);
    }
    if (cfg.benchmark) {
        const auto& b = cfg.benchmark->config;
        root["benchmark"] = {
            {"cutoffs", b.cutoffs},     {"repetitions", b.repetitions},
            {"particles", b.n_particles}, {"observations", b.n_observations},
            {"t_final", b.t_final},     {"dt", b.dt},
            {"kappa", b.kappa},         {"s0", b.prior_s0},
            {"alpha", b.prior_alpha},   {"run_reference", b.run_reference}};
    }
    return root.dump(2) + "\n";
}

AdProblemSpec make_ad_spec(const RunConfig& cfg) {
    if (cfg.problem != ProblemKind::ad)
        throw ConfigError("problem", "expected an \"ad\" configuration");
    AdProblemSpec spec;
    spec.velocity = cfg.velocity;
    spec.diffusion = DiffusionModel::isotropic(cfg.kappa);
    spec.initial_condition = cfg.initial_condition;
    spec.observations = cfg.ad_observations;
    spec.dt = cfg.dt;
    spec.n_particles = cfg.particles;
    spec.scheme = cfg.scheme;
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError("observations", e.what());
    }
    return spec;
}

BvpProblemSpec make_bvp_spec(const RunConfig& cfg) {
    if (cfg.problem != ProblemKind::bvp)
        throw ConfigError("problem", "expected a \"bvp\" configuration");
    BvpProblemSpec spec;
    spec.velocity = cfg.velocity;
    spec.diffusion = DiffusionModel::isotropic(cfg.kappa);
    spec.forcing = cfg.forcing;
    spec.boundary_data = cfg.boundary_data;
    spec.domain = cfg.domain;
    spec.observations = cfg.bvp_observations;
    spec.dt = cfg.dt;
    spec.n_particles = cfg.particles;
    spec.scheme = cfg.scheme;
    spec.max_steps = cfg.max_steps;
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError("observations", e.what());
    }
    return spec;
}

LikelihoodSpec make_likelihood(const RunConfig& cfg) {
    if (!cfg.prior) throw ConfigError("prior", "section required for sampling");
    if (!cfg.likelihood) throw ConfigError("likelihood", "section required for sampling");
    LikelihoodSpec like;
    like.data = cfg.likelihood->data;
    like.forward = make_ad_spec(cfg);
    like.forward_seed = cfg.likelihood->forward_seed;
    like.workers = cfg.workers;
    if (cfg.likelihood->noise_std > 0.0) {
        like.noise_std = cfg.likelihood->noise_std;
    } else {
        double ss = 0.0;
        for (double y : like.data) ss += y * y;
        const double rms = like.data.empty() ? 0.0 : std::sqrt(ss / double(like.data.size()));
        like.noise_std = 0.1 * rms;
        if (!(like.noise_std > 0.0))
            throw ConfigError("likelihood.noise_std", "default rule needs nonzero data");
    }
    try {
        like.validate();
    } catch (const std::exception& e) {
        throw ConfigError("likelihood", e.what());
    }
    return like;
}

ForcingControl make_forcing_control(const RunConfig& cfg) {
    if (!cfg.optimize) throw ConfigError("optimize", "section required for optimization");
    ForcingControl control;
    control.centers = cfg.optimize->centers;
    control.sharpness = cfg.optimize->sharpness;
    control.target = cfg.optimize->target;
    control.initial_amplitudes = cfg.optimize->initial;
    control.observation_points = cfg.bvp_observations;
    try {
        control.validate();
    } catch (const std::exception& e) {
        throw ConfigError("optimize", e.what());
    }
    return control;
}

}  // namespace scalarmc
