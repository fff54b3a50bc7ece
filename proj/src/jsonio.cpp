#include "orbispace/jsonio.hpp"

#include "orbispace/numlab.hpp"

#include <sstream>

namespace orbi::io {

namespace {

Rat rat_from_json(const Json& v) {
    if (v.is_number_integer()) return Rat(Int(v.get<long long>()));
    if (v.is_string()) return parse_rat(v.get<std::string>());
    throw Error(ErrorCode::InvalidInput, "expected an integer or a \"p/q\" string");
}

Int int_from_json(const Json& v) {
    if (v.is_number_integer()) return Int(v.get<long long>());
    if (v.is_string()) return Int(v.get<std::string>());
    throw Error(ErrorCode::InvalidInput, "expected an integer");
}

Json int_to_json(const Int& v) {
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return Json(v.convert_to<long long>());
    return Json(v.str());
}

lin::RatMatrix matrix_from_json(const Json& rows, std::size_t expect_rows,
                                std::size_t expect_cols, const char* what) {
    if (!rows.is_array() || rows.size() != expect_rows)
        throw Error(ErrorCode::InvalidInput, std::string(what) + ": wrong row count");
    lin::RatMatrix m(expect_rows, expect_cols);
    for (std::size_t i = 0; i < expect_rows; ++i) {
        if (!rows[i].is_array() || rows[i].size() != expect_cols)
            throw Error(ErrorCode::InvalidInput, std::string(what) + ": wrong column count");
        for (std::size_t j = 0; j < expect_cols; ++j) m.at(i, j) = rat_from_json(rows[i][j]);
    }
    return m;
}

Json matrix_to_json(const lin::RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_str(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json element_to_json(const rep::MonomialElement& g, const std::string& name) {
    Json out = Json::object();
    if (!name.empty()) out["name"] = name;
    out["perm"] = g.perm;
    out["conj"] = Json::array();
    for (bool b : g.conj) out["conj"].push_back(b);
    out["rot"] = Json::array();
    for (const Rat& r : g.rot) out["rot"].push_back(rat_str(r));
    out["v0_block"] = matrix_to_json(g.v0_block);
    return out;
}

}  // namespace

rep::RepSpec parse_spec(const Json& doc, std::size_t max_lines) {
    if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "document must be a JSON object");
    rep::RepSpec spec;
    if (!doc.contains("m") || !doc["m"].is_number_integer() || doc["m"].get<long long>() < 0)
        throw Error(ErrorCode::InvalidInput, "missing or invalid torus rank \"m\"");
    spec.m = doc["m"].get<std::size_t>();

    if (!doc.contains("weights") || !doc["weights"].is_array())
        throw Error(ErrorCode::InvalidInput, "missing \"weights\" array");
    std::vector<std::vector<Int>> weights;
    for (const auto& row : doc["weights"]) {
        if (!row.is_array() || row.size() != spec.m)
            throw Error(ErrorCode::InvalidInput, "weight vectors must have length m");
        std::vector<Int> w;
        for (const auto& v : row) w.push_back(int_from_json(v));
        weights.push_back(std::move(w));
    }
    if (weights.size() > max_lines)
        throw Error(ErrorCode::InvalidInput,
                    "document exceeds the line guard (" + std::to_string(max_lines) + ")");
    spec.weights = ws::WeightMultiset::of(spec.m, std::move(weights));

    spec.v0_dim = doc.value("v0_dim", 0);
    if (doc.contains("v0_gram"))
        spec.v0_gram = matrix_from_json(doc["v0_gram"], spec.v0_dim, spec.v0_dim, "v0_gram");
    else
        spec.v0_gram = lin::RatMatrix::identity(spec.v0_dim);

    if (doc.contains("generators")) {
        if (!doc["generators"].is_array())
            throw Error(ErrorCode::InvalidInput, "\"generators\" must be an array");
        for (const auto& gj : doc["generators"]) {
            rep::MonomialElement g;
            if (!gj.contains("perm") || !gj["perm"].is_array())
                throw Error(ErrorCode::InvalidInput, "generator needs a \"perm\" array");
            for (const auto& v : gj["perm"]) g.perm.push_back(v.get<std::size_t>());
            std::size_t n = spec.lines();
            if (g.perm.size() != n)
                throw Error(ErrorCode::InvalidInput, "generator perm has wrong length");
            if (gj.contains("conj"))
                for (const auto& v : gj["conj"]) g.conj.push_back(v.get<bool>());
            else
                g.conj.assign(n, false);
            if (gj.contains("rot"))
                for (const auto& v : gj["rot"]) g.rot.push_back(mod1(rat_from_json(v)));
            else
                g.rot.assign(n, Rat(0));
            if (gj.contains("v0_block"))
                g.v0_block = matrix_from_json(gj["v0_block"], spec.v0_dim, spec.v0_dim, "v0_block");
            else
                g.v0_block = lin::RatMatrix::identity(spec.v0_dim);
            spec.generators.push_back(std::move(g));
            spec.generator_names.push_back(gj.value("name", ""));
        }
    }

    if (doc.contains("caps")) {
        const auto& caps = doc["caps"];
        spec.caps.group_order_cap = caps.value("group_order_cap", spec.caps.group_order_cap);
        spec.caps.iv_trials = caps.value("iv_trials", spec.caps.iv_trials);
        spec.caps.seed = caps.value("seed", spec.caps.seed);
    }
    return spec;
}

Json spec_to_json(const rep::RepSpec& spec) {
    Json out = Json::object();
    out["version"] = "1";
    out["m"] = spec.m;
    Json weights = Json::array();
    for (const auto& w : spec.weights.items) {
        Json row = Json::array();
        for (const Int& x : w) row.push_back(int_to_json(x));
        weights.push_back(std::move(row));
    }
    out["weights"] = std::move(weights);
    out["v0_dim"] = spec.v0_dim;
    out["v0_gram"] = matrix_to_json(spec.v0_gram);
    Json gens = Json::array();
    for (std::size_t i = 0; i < spec.generators.size(); ++i)
        gens.push_back(element_to_json(
            spec.generators[i],
            i < spec.generator_names.size() ? spec.generator_names[i] : std::string{}));
    out["generators"] = std::move(gens);
    out["caps"] = {{"group_order_cap", spec.caps.group_order_cap},
                   {"iv_trials", spec.caps.iv_trials},
                   {"seed", spec.caps.seed}};
    return out;
}

Json verdict_to_json(const ver::Verdict& verdict) {
    Json out = Json::object();
    out["topological"] = ver::to_string(verdict.topological);
    out["smooth_for_all_d"] = ver::to_string(verdict.smooth);
    if (verdict.capped) out["capped"] = true;
    Json cert = Json::array();
    for (const auto& step : verdict.certificate) {
        Json s = Json::object();
        s["theorem"] = ver::tag_name(step.tag);
        s["detail"] = step.detail;
        if (!step.witness.empty()) s["witness"] = step.witness;
        cert.push_back(std::move(s));
    }
    out["certificate"] = std::move(cert);
    return out;
}

Json trace_to_json(const red::ReductionTrace& trace) {
    Json steps = Json::array();
    for (const auto& step : trace.steps) {
        Json s = Json::object();
        s["classes"] = step.class_orbit;
        Json rels = Json::array();
        for (std::size_t i = 0; i < step.relations.size(); ++i) {
            const auto& rel = step.relations[i];
            Json r = Json::object();
            r["indices"] = rel.class_indices;
            r["flips"] = rel.sign_flips;
            Json exps = Json::array();
            for (const Int& a : rel.coefficients) exps.push_back(int_to_json(a));
            r["exponents"] = std::move(exps);
            Json comb = Json::array();
            for (const Int& x : rel.combination) comb.push_back(int_to_json(x));
            r["combination"] = std::move(comb);
            r["multiplier"] = int_to_json(step.multipliers[i]);
            rels.push_back(std::move(r));
        }
        s["relations"] = std::move(rels);
        Json nw = Json::array();
        for (const auto& w : step.new_weights) {
            Json row = Json::array();
            for (const Int& x : w) row.push_back(int_to_json(x));
            nw.push_back(std::move(row));
        }
        s["new_weights"] = std::move(nw);
        s["folded"] = step.folded;
        s["m_before"] = step.m_before;
        s["m_after"] = step.m_after;
        s["v0_before"] = step.v0_before;
        s["v0_after"] = step.v0_after;
        s["group_propagated"] = step.group_propagated;
        if (!step.warning.empty()) s["warning"] = step.warning;
        steps.push_back(std::move(s));
    }
    return steps;
}

namespace {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::CapExceeded: return 2;
        case ErrorCode::InternalContradiction: return 3;
        default: return 1;
    }
}

Json omega_to_json(const rep::OmegaWitness& w) {
    Json out = Json::object();
    switch (w.state) {
        case rep::OmegaWitness::State::Yes: out["state"] = "yes"; break;
        case rep::OmegaWitness::State::No: out["state"] = "no"; break;
        case rep::OmegaWitness::State::Capped: out["state"] = "unknown-capped"; break;
    }
    if (w.witness) out["witness"] = element_to_json(*w.witness, "");
    return out;
}

}  // namespace

CommandResult run_command(const std::string& command, const std::string& input_text,
                          const CommandOptions& opts) {
    CommandResult result;
    result.report["command"] = command;
    try {
        Json doc;
        try {
            doc = Json::parse(input_text);
        } catch (const nlohmann::json::parse_error& err) {
            throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + err.what());
        }
        rep::RepSpec spec = parse_spec(doc, opts.max_lines);
        if (opts.cap) spec.caps.group_order_cap = *opts.cap;
        if (opts.seed) spec.caps.seed = *opts.seed;
        if (opts.trials) spec.caps.iv_trials = *opts.trials;

        if (command == "validate") {
            auto infos = rep::validate(spec);
            result.report["ok"] = true;
            Json gens = Json::array();
            for (std::size_t i = 0; i < infos.size(); ++i) {
                Json g = Json::object();
                g["name"] = i < spec.generator_names.size() ? spec.generator_names[i]
                                                            : std::string{};
                g["ad"] = matrix_to_json(infos[i].ad);
                g["rk_e_minus_ad"] = infos[i].rk_e_minus_ad;
                g["dim_ker_e_minus_g"] = infos[i].dim_ker_e_minus_g;
                g["rk_e_minus_g"] = infos[i].rk_e_minus_g;
                g["omega"] = infos[i].omega;
                g["in_omega"] = infos[i].in_omega;
                gens.push_back(std::move(g));
            }
            result.report["generators"] = std::move(gens);
        } else if (command == "stability") {
            rep::validate(spec);
            result.report["q"] = opts.q;
            result.report["stable"] = ws::is_q_stable(spec.weights, opts.q);
        } else if (command == "reduce") {
            rep::validate(spec);
            auto trace = red::reduce_to_2stable(spec);
            result.report["reduction_trace"] = trace_to_json(trace);
            result.report["final"] = spec_to_json(trace.final_spec);
        } else if (command == "group") {
            auto group = rep::component_group(spec);
            result.report["coset_count"] = group.size();
            Json cosets = Json::array();
            for (const auto& c : group.cosets) {
                Json cj = Json::object();
                cj["rep"] = element_to_json(c.rep, "");
                cj["ad"] = matrix_to_json(c.ad);
                cj["meets_omega"] = omega_to_json(rep::coset_meets_omega(spec, group, c));
                cosets.push_back(std::move(cj));
            }
            result.report["cosets"] = std::move(cosets);
        } else if (command == "analyze") {
            auto out = ver::analyze_with_trace(spec);
            result.report["verdict"] = verdict_to_json(out.verdict);
            result.report["reduction_trace"] = trace_to_json(out.trace);
        } else if (command == "lab") {
            rep::validate(spec);
            std::size_t trials = opts.trials.value_or(200);
            auto checks = lab::verify_suite(spec, spec.caps.seed, trials);
            Json arr = Json::array();
            bool all_pass = true;
            for (const auto& check : checks) {
                Json c = Json::object();
                c["check"] = check.check;
                c["trials"] = check.trials;
                c["max_defect"] = check.max_defect;
                c["pass"] = check.pass;
                all_pass = all_pass && check.pass;
                arr.push_back(std::move(c));
            }
            result.report["report"] = std::move(arr);
            result.report["pass"] = all_pass;
        } else {
            throw Error(ErrorCode::InvalidInput, "unknown command: " + command);
        }
    } catch (const Error& err) {
        result.report["error"] = {{"code", error_name(err.code())}, {"message", err.what()}};
        result.exit_code = exit_code_for(err.code());
    }
    return result;
}

std::string human_summary(const Json& report) {
    std::ostringstream out;
    std::string command = report.value("command", "");
    if (report.contains("error")) {
        out << command << ": error " << report["error"]["code"].get<std::string>() << " - "
            << report["error"]["message"].get<std::string>() << "\n";
        return out.str();
    }
    if (command == "validate") {
        out << "validate: ok, " << report["generators"].size() << " generator(s)\n";
    } else if (command == "stability") {
        out << "stability: q=" << report["q"] << " -> "
            << (report["stable"].get<bool>() ? "stable" : "not stable") << "\n";
    } else if (command == "reduce") {
        out << "reduce: " << report["reduction_trace"].size() << " step(s), final torus rank "
            << report["final"]["m"] << ", fixed block " << report["final"]["v0_dim"] << "\n";
    } else if (command == "group") {
        out << "group: " << report["coset_count"] << " coset(s)\n";
    } else if (command == "analyze") {
        const auto& v = report["verdict"];
        out << "analyze: topological=" << v["topological"].get<std::string>()
            << " smooth_for_all_d=" << v["smooth_for_all_d"].get<std::string>() << "\n";
        for (const auto& step : v["certificate"])
            out << "  [" << step["theorem"].get<std::string>() << "] "
                << step["detail"].get<std::string>() << "\n";
    } else if (command == "lab") {
        for (const auto& check : report["report"])
            out << "lab: " << check["check"].get<std::string>()
                << (check["pass"].get<bool>() ? " pass" : " FAIL")
                << " (max defect " << check["max_defect"].dump() << ")\n";
    }
    return out.str();
}

}  // namespace orbi::io
