// Command-line front end: every subcommand writes exactly one JSON document to
// stdout (diagnostics go to stderr) and exits 0 only when the operation and
// every internal exact verification succeeded.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "commwit/json_io.hpp"

using namespace commwit;

namespace {

struct MatrixInput {
    std::string path;   // file, or "-" for stdin
    std::string inline_json;
};

json read_json_input(const MatrixInput& in) {
    std::string text;
    if (!in.inline_json.empty()) {
        text = in.inline_json;
    } else if (in.path == "-" || in.path.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream f(in.path);
        if (!f) fail(Err::InvalidArgument, "cannot open input '" + in.path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(Err::InvalidArgument, "input is not valid JSON");
    return j;
}

RMatrix read_matrix(const MatrixInput& in, u64 p, u32 k, std::size_t n) {
    json j = read_json_input(in);
    RMatrix m = [&] {
        if (j.is_array()) {
            // bare rows need explicit ring parameters
            if (p == 0 || n == 0) fail(Err::InvalidArgument, "bare row input needs -p/-n (and -k)");
            std::vector<i64> vals;
            if (j.size() != n) fail(Err::InvalidArgument, "row count mismatch");
            for (const auto& row : j) {
                if (!row.is_array() || row.size() != n) fail(Err::InvalidArgument, "row length mismatch");
                for (const auto& v : row) vals.push_back(v.get<i64>());
            }
            return RMatrix::from_values(Ring::zmod(p, k == 0 ? 1 : k), n, vals);
        }
        return matrix_from_json(j);
    }();
    if (p != 0 && m.ring().p() != p) fail(Err::InvalidArgument, "-p disagrees with the input ring");
    if (k != 0 && m.ring().k() != k) fail(Err::InvalidArgument, "-k disagrees with the input ring");
    if (n != 0 && m.n() != n) fail(Err::InvalidArgument, "-n disagrees with the input matrix");
    return m;
}

int emit(const json& doc, const std::string& out_path) {
    std::string text = doc.dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) fail(Err::InvalidArgument, "cannot write output '" + out_path + "'");
        f << text;
    }
    std::cout << text;
    return 0;
}

std::vector<u64> parse_diag(const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

const char* route_name(ScalarRoute r) {
    switch (r) {
    case ScalarRoute::PlainCycle: return "plain-cycle";
    case ScalarRoute::MuRescaled: return "mu-rescaled";
    case ScalarRoute::TwistedAlgebra: return "twisted-algebra";
    case ScalarRoute::PairSearch: return "pair-search";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact commutator witnesses and word maps in SL_n / PSL_n over Z/p^k"};
    app.require_subcommand(1);
    app.fallthrough(); // let --seed and friends appear after the subcommand too

    u64 seed = 0; // reserved for randomized searches; current searches are deterministic
    app.add_option("--seed", seed, "seed for randomized searches (all searches are deterministic)");

    u64 p = 0;
    u32 k = 0;
    std::size_t n = 0;
    std::string out_path;
    MatrixInput min;
    int jobs = 1;
    u64 budget = 5'000'000;
    bool with_trace = false;

    auto add_ring_opts = [&](CLI::App* sc, bool matrix_input) {
        sc->add_option("-p,--prime", p, "residue characteristic");
        sc->add_option("-k,--precision", k, "ring precision (Z/p^k)");
        sc->add_option("-n,--dim", n, "matrix dimension");
        sc->add_option("-o,--out", out_path, "also write the JSON document to this file");
        if (matrix_input) {
            sc->add_option("-i,--in", min.path, "input file ('-' for stdin)");
            sc->add_option("--json", min.inline_json, "inline JSON input");
        }
    };

    auto* decompose = app.add_subcommand("decompose", "commutator witness for a non-scalar-mod-p target");
    add_ring_opts(decompose, true);
    decompose->add_flag("--trace", with_trace, "include the unipotent diagonalization trace");

    auto* scalar = app.add_subcommand("scalar-lift", "witness for a target congruent to lambda*I mod p");
    add_ring_opts(scalar, true);
    u64 lambda_flag = 0;
    scalar->add_option("--lambda", lambda_flag, "primitive n-th root of unity (default: inferred)");

    auto* psl = app.add_subcommand("psl", "commutator witness for a PSL_n representative");
    add_ring_opts(psl, true);

    auto* verify = app.add_subcommand("verify", "re-check a witness file from scratch");
    add_ring_opts(verify, true);

    auto* wimage = app.add_subcommand("word-image", "exhaustive word image in SL_n(F_p)");
    add_ring_opts(wimage, false);
    std::vector<std::string> words;
    wimage->add_option("--word", words, "word, e.g. \"x1^2\" or \"[x1,x2]\"")->required();
    wimage->add_option("--budget", budget, "tuple enumeration budget");
    wimage->add_option("-j,--jobs", jobs, "parallel workers (1 = serial reference)");

    auto* cover = app.add_subcommand("cover-check", "double/triple product cover check");
    add_ring_opts(cover, false);
    cover->add_option("--word", words, "two or three words (repeat the flag)")->required();
    cover->add_option("--budget", budget, "tuple enumeration budget");
    cover->add_option("-j,--jobs", jobs, "parallel workers");

    auto* clsprod = app.add_subcommand("class-product", "regular split torus class product check");
    add_ring_opts(clsprod, false);
    std::string t1s, t2s;
    clsprod->add_option("--t1", t1s, "first torus diagonal, e.g. \"2,3\"")->required();
    clsprod->add_option("--t2", t2s, "second torus diagonal")->required();
    clsprod->add_option("--budget", budget, "enumeration budget");
    clsprod->add_option("-j,--jobs", jobs, "parallel workers");

    auto* obstruct = app.add_subcommand("obstruction", "scan commutator preimages for fixed covectors");
    add_ring_opts(obstruct, true);
    bool target_identity = false;
    obstruct->add_flag("--identity", target_identity, "use the identity as the target");
    obstruct->add_option("--budget", budget, "pair enumeration budget");
    obstruct->add_option("-j,--jobs", jobs, "parallel workers");

    auto* nilp = app.add_subcommand("nilpotent-demo", "certify a non-commutator over the square-zero extension");
    add_ring_opts(nilp, false);
    nilp->add_option("--budget", budget, "pair enumeration budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*decompose) {
            RMatrix A = read_matrix(min, p, k, n);
            auto [w, tr] = commutator_witness(A);
            auto check = verify_witness(w, &tr);
            if (!check.ok) fail(Err::InvalidArgument, check.reason);
            return emit(witness_to_json(w, with_trace ? &tr : nullptr), out_path);
        }
        if (*scalar) {
            RMatrix A = read_matrix(min, p, k, n);
            RingElem lambda = lambda_flag != 0
                                  ? RingElem(Ring::zmod(A.ring().p(), 1), lambda_flag)
                                  : A.reduce_to_field().at(0, 0);
            if (!is_scalar_mod_m(A))
                fail(Err::HypothesisViolated, "target is not scalar modulo p");
            if (lambda.is_zero() || multiplicative_order(lambda) != A.n())
                fail(Err::NotCovered, "residue scalar is not a primitive n-th root of unity; no "
                                      "construction covers this target");
            auto res = scalar_commutator(lambda, A);
            auto check = verify_witness(res.witness);
            if (!check.ok) fail(Err::InvalidArgument, check.reason);
            json doc = witness_to_json(res.witness);
            doc["route"] = route_name(res.route);
            doc["base_pair"] = json{{"g1", matrix_to_json(res.base_g1)}, {"g2", matrix_to_json(res.base_g2)}};
            return emit(doc, out_path);
        }
        if (*psl) {
            RMatrix A = read_matrix(min, p, k, n);
            PslWitness res = psl_commutator(A);
            auto check = verify_witness(res.witness);
            if (!check.ok) fail(Err::InvalidArgument, check.reason);
            json doc = witness_to_json(res.witness);
            doc["zeta"] = res.zeta.value();
            doc["scalar_route"] = res.scalar_route;
            return emit(doc, out_path);
        }
        if (*verify) {
            ParsedWitness pw = witness_from_json(read_json_input(min));
            auto check = verify_witness(pw.witness, pw.trace ? &*pw.trace : nullptr);
            json doc{{"ok", check.ok},
                     {"mode", pw.witness.mode == WitnessMode::SL ? "SL" : "PSL"},
                     {"ring", pw.witness.target.ring().token()},
                     {"has_trace", pw.trace.has_value()}};
            if (!check.ok) doc["reason"] = check.reason;
            emit(doc, out_path);
            return check.ok ? 0 : 1;
        }
        if (*wimage) {
            if (words.size() != 1) fail(Err::InvalidArgument, "word-image takes exactly one --word");
            if (n == 0 || p == 0) fail(Err::InvalidArgument, "word-image needs -n and -p");
            auto rep = word_image(Word::parse(words[0]), n, p, budget, jobs);
            return emit(report_to_json(rep), out_path);
        }
        if (*cover) {
            if (n == 0 || p == 0) fail(Err::InvalidArgument, "cover-check needs -n and -p");
            if (words.size() == 3) {
                auto rep = check_triple_cover(Word::parse(words[0]), Word::parse(words[1]),
                                              Word::parse(words[2]), n, p, budget, jobs);
                return emit(report_to_json(rep, "triple"), out_path);
            }
            if (words.size() == 2) {
                auto rep = check_double_cover_noncentral(Word::parse(words[0]), Word::parse(words[1]), n,
                                                         p, budget, jobs);
                return emit(report_to_json(rep, "double-noncentral"), out_path);
            }
            fail(Err::InvalidArgument, "cover-check takes two or three --word options");
        }
        if (*clsprod) {
            if (n == 0 || p == 0) fail(Err::InvalidArgument, "class-product needs -n and -p");
            auto rep = check_class_product(n, p, parse_diag(t1s), parse_diag(t2s), budget, jobs);
            return emit(report_to_json(rep), out_path);
        }
        if (*obstruct) {
            if (n == 0 || p == 0) fail(Err::InvalidArgument, "obstruction needs -n and -p");
            RMatrix gbar = target_identity ? RMatrix::identity(Ring::zmod(p, 1), n)
                                           : read_matrix(min, p, 0, n).reduce_to_field();
            auto rep = obstruction_scan(gbar, budget, jobs);
            return emit(report_to_json(rep), out_path);
        }
        if (*nilp) {
            if (n == 0 || p == 0) fail(Err::InvalidArgument, "nilpotent-demo needs -n and -p");
            auto rep = nilpotent_noncommutator_check(n, p, budget);
            return emit(report_to_json(rep), out_path);
        }
    } catch (const Error& e) {
        json doc{{"error", json{{"code", err_name(e.code())}, {"message", e.what()}}}};
        std::cout << doc.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        json doc{{"error", json{{"code", "InvalidArgument"}, {"message", e.what()}}}};
        std::cout << doc.dump(2) << "\n";
        return 1;
    }
    return 2;
}
