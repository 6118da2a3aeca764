#include "qm/cli.hpp"

#include "qm/convergence.hpp"
#include "qm/descriptors.hpp"
#include "qm/errors.hpp"
#include "qm/fraisse.hpp"
#include "qm/framing.hpp"
#include "qm/io.hpp"
#include "qm/mutclass.hpp"
#include "qm/quiver.hpp"
#include "qm/words.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <sstream>

namespace qm::cli {

namespace {

// --quiver/--desc/--target arguments accept a file path or inline JSON.
std::string load_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return arg;
    return read_file(arg);
}

Quiver load_quiver(const std::string& arg) { return quiver_from_json(load_arg(arg)); }

SequenceDescriptor load_descriptor(const std::string& arg) {
    return descriptor_from_json(load_arg(arg));
}

struct Output {
    std::string path; // empty = stdout
    void emit(std::ostream& out, const std::string& content) const {
        if (path.empty())
            out << content << (content.empty() || content.back() == '\n' ? "" : "\n");
        else
            write_file(path, content);
    }
};

std::string quiver_output(const Quiver& q, const std::string& format) {
    if (format == "dot") return to_dot(q);
    return quiver_to_json(q);
}

PropertyKind parse_property(const std::string& name, int depth, const std::string& weights) {
    if (name == "finite") return PropertyKind::finite();
    if (name == "connected") return PropertyKind::connected();
    if (name == "acyclic") return PropertyKind::acyclic();
    if (name == "abundant") return PropertyKind::abundant();
    if (name == "weight-in") {
        std::set<long long> s;
        for (Vertex v : parse_word_arg(weights)) s.insert(v);
        if (s.empty()) throw MalformedCode("weight-in needs --weights");
        return PropertyKind::has_weight_in(std::move(s));
    }
    if (name == "mutation-acyclic") return PropertyKind::mutation_acyclic_within(depth);
    if (name == "tame") return PropertyKind::tame_within(depth);
    throw MalformedCode("unknown property: " + name);
}

std::string cvector_json(const CVector& c) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [y, e] : c.entries) {
        if (!first) os << ',';
        first = false;
        os << '"' << y << "\":" << e;
    }
    os << '}';
    return os.str();
}

} // namespace

bool run_example_battery(std::ostream& out) {
    int failed = 0;
    auto check = [&](const std::string& name, bool ok) {
        out << (ok ? "ok: " : "FAIL: ") << name << "\n";
        if (!ok) ++failed;
    };

    // Mutation of the 3-cycle at 2 gives the path 3 -> 2 -> 1.
    Quiver cyc = Quiver::from_arrows({{1, 2, 1}, {2, 3, 1}, {3, 1, 1}});
    Quiver path = Quiver::from_arrows({{2, 1, 1}, {3, 2, 1}});
    check("mutation of the oriented 3-cycle at 2", mutate(cyc, 2) == path);
    check("3-cycle is not acyclic, its mutation is",
          !is_acyclic(cyc) && is_acyclic(mutate(cyc, 2)));

    // Restriction vs overfill on the two-sided ray, window [-5..5] as [1..11].
    Quiver ray = two_sided_ray_window(11, 6);
    Quiver restr = restrict_to(ray, {5, 6, 7});
    check("two-sided ray restriction to the center window",
          restr == Quiver::from_arrows({{6, 5, 1}, {6, 7, 1}}));
    Quiver over = overfill(ray, {5, 6, 7});
    bool over_ok = over.count(5, 4) == 1 && over.count(7, 8) == 1 && over.count(8, 9) == 0;
    for (Vertex k = 1; k <= 11; ++k)
        if (k != 6) over_ok = over_ok && over.count(6, k) == 1;
    check("two-sided ray overfill on the center window", over_ok);

    // The Markov quiver resists the bounded mutation-acyclicity search.
    Quiver markov = Quiver::from_arrows({{1, 2, 2}, {2, 3, 2}, {3, 1, 2}});
    check("Markov quiver is mutation-acyclic-unknown at depth 6",
          check_property(markov, PropertyKind::mutation_acyclic_within(6)) == Tri::Unknown);

    // Reduction of the pair-block word is empty with rank 1.
    Word pairs;
    for (Vertex k = 1; k <= 10; ++k) {
        pairs.push_back(k);
        pairs.push_back(k);
    }
    ReductionTrace tr = reduction_trace(pairs);
    check("pair blocks reduce to the empty word at rank 1",
          reduce_word(pairs).empty() && tr.rank == 1);

    // A word is reduced iff its rank is 0.
    check("reduced iff rank 0", reduction_trace({1, 2, 1}).rank == 0 &&
                                    reduction_trace({1, 1, 2}).rank != 0);

    // The first palindromic blocks and their induced subsequence.
    Word tri_prefix = take(SequenceDescriptor::triangular_palindromes(), 12).letters;
    check("palindromic blocks open with (1,1,2,3,3,2,4,5,6,6,5,4)",
          tri_prefix == Word{1, 1, 2, 3, 3, 2, 4, 5, 6, 6, 5, 4} && reduce_word(tri_prefix).empty());
    check("palindromic blocks induced by {1,2,3}",
          induced_word(tri_prefix, {1, 2, 3}) == Word{1, 1, 2, 3, 3, 2});

    // The worked irreducible word over {1,2,5,8}: the recursive extension of
    // (5) by 2, 8, 1 in turn (the closing letter 1 included).
    Word worked{5, 2, 5, 2, 8, 2, 5, 2, 5, 8, 1, 8, 5, 2, 5, 2, 8, 2, 5, 2, 5, 1};
    check("the worked word over {1,2,5,8} is irreducible", is_irreducible(worked));

    // The empty set is never linked.
    check("empty set unlinked", is_linked(SequenceDescriptor::identity_ray(), {}, 50) == Tri::No);

    // Q_n, its acyclic order, and the fork produced by a middle mutation.
    Quiver q3 = qn_abundant(3);
    auto order = acyclic_order(q3, q3.support());
    check("acyclic order of the doubled staircase quiver",
          order && *order == std::vector<Vertex>{4, 3, 2, 1});
    check("mutating the staircase at a middle vertex returns a fork there",
          fork_point(mutate(q3, 2)) == std::optional<Vertex>(2));
    check("sink sequences are strongly triangular",
          is_strongly_triangular({1, 2, 3}, q3, 4) && !is_triangular({3, 1, 2}, q3));

    // c-vectors: the two-arrow base case and the stabilized values.
    Quiver q1 = qn_abundant(1);
    FramedQuiver f1 = mutate_framed(frame(q1), 1);
    CVector c2 = c_vector(f1, 2);
    check("base case c-vector (2,1) with colors red/green",
          c2.entries[1] == 2 && c2.entries[2] == 1 && color(f1, 1) == Color::Red &&
              color(f1, 2) == Color::Green);
    FramedQuiver f2 = mutate_framed_word(frame(qn_abundant(2)), {1, 2});
    check("stabilized c-vector (6,2,1) after the sink sequence",
          c_vector(f2, 3) == stabilized_c_vector(2));

    // A-infinity trajectories: identity ray restores the ray, shifted ray
    // diverges strongly at vertex 1 but converges weakly off it.
    Quiver award = a_infinity_window(40);
    VertexSet w20;
    for (Vertex v = 1; v <= 20; ++v) w20.insert(v);
    Certificate ident = strong_certificate(Trajectory(award, SequenceDescriptor::identity_ray()),
                                           w20, 45);
    check("identity ray strong-stabilizes to the initial window",
          ident.status == Certificate::Status::StableSince &&
              ident.limit_view == overfill(award, w20));
    Certificate osc = strong_certificate(Trajectory(award, SequenceDescriptor::shifted_ray(2)),
                                         {1}, 35);
    check("shifted ray oscillates strongly at vertex 1",
          osc.status == Certificate::Status::OscillationWitness);
    Certificate weak = weak_certificate(Trajectory(award, SequenceDescriptor::shifted_ray(2)),
                                        w20, 45);
    Quiver limit_expected;
    for (Vertex k = 2; k < 20; ++k) limit_expected.set(k, k + 1, 1);
    check("shifted ray converges weakly to the truncated ray",
          weak.status == Certificate::Status::StableSince && weak.limit_view == limit_expected);

    // The convergence trichotomy on registry sequences.
    check("pair blocks put every quiver in the convergence domain",
          classify_lf(SequenceDescriptor::pair_blocks(), 60).verdict == LfVerdict::AllConverge);
    check("identity ray splits both domains densely",
          classify_lf(SequenceDescriptor::identity_ray(), 60).verdict == LfVerdict::BothDense);
    LfClassification rep = classify_lf(SequenceDescriptor::repeat(4), 60);
    check("a repeated letter blocks density of convergence",
          rep.verdict == LfVerdict::CNotDense && rep.divergence_dense == Tri::No);

    // Steering the generic quiver to the Markov window.
    GenericQuiver g(7);
    SteerReport steer = steer_toward(g, markov, 3);
    check("steering reaches the Markov window with monotone agreement",
          verify_steering(g, steer, markov, 3));
    GenericQuiver g2(7);
    auto isos = back_and_forth(g2, 1, 4);
    check("back-and-forth opens with the singleton partial isomorphism",
          isos.size() == 4 && isos[0].pairs == std::vector<std::pair<Vertex, Vertex>>{{1, 1}});

    // Mutation classes: Markov closes after one class; the map of classes
    // sends the arrowless quiver to the one-vertex class.
    MutationClassNode mc = explore_class(markov, 4, 50);
    check("Markov mutation class is one exhausted iso class",
          mc.members_found == 1 && mc.frontier_exhausted);
    check("the arrowless quiver collapses to the one-vertex class",
          strip_isolated(Quiver()).one_vertex && !strip_isolated(markov).one_vertex);

    return failed == 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"quiver mutation toolkit"};
    app.require_subcommand(1);

    std::string format = "json";
    Output output;
    long long horizon = 200;
    std::uint64_t seed = 1;
    app.add_option("--format", format)->check(CLI::IsMember({"json", "dot", "text"}));
    app.add_option("--out", output.path);
    app.add_option("--horizon", horizon);
    app.add_option("--seed", seed);

    std::function<std::string()> action;

    // mutate
    auto* mutate_cmd = app.add_subcommand("mutate", "mutate a quiver at a vertex");
    std::string arg_quiver, arg_word, arg_desc, arg_set, arg_prop, arg_weights, arg_target,
        arg_family, arg_kind, arg_dot;
    int arg_at = 0, arg_depth = 0, arg_window = 0, arg_radius = 0, arg_stages = 0,
        arg_segments = 3;
    long long arg_steps = 0, arg_emit_every = 0, arg_max_weight = 4, arg_max_nodes = 200;
    mutate_cmd->add_option("--quiver", arg_quiver)->required();
    mutate_cmd->add_option("--at", arg_at)->required();
    mutate_cmd->callback([&] {
        action = [&] { return quiver_output(mutate(load_quiver(arg_quiver), arg_at), format); };
    });

    // check
    auto* check_cmd = app.add_subcommand("check", "evaluate a property predicate");
    check_cmd->add_option("--quiver", arg_quiver)->required();
    check_cmd->add_option("--prop", arg_prop)->required();
    check_cmd->add_option("--depth", arg_depth);
    check_cmd->add_option("--weights", arg_weights);
    check_cmd->callback([&] {
        action = [&] {
            PropertyKind p = parse_property(arg_prop, arg_depth, arg_weights);
            return std::string(to_string(check_property(load_quiver(arg_quiver), p)));
        };
    });

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "prime-power window encoding");
    encode_cmd->add_option("--quiver", arg_quiver)->required();
    encode_cmd->add_option("--window", arg_window)->required();
    encode_cmd->callback([&] {
        action = [&] {
            std::ostringstream os;
            os << '[';
            auto code = lf_encode(load_quiver(arg_quiver), arg_window);
            for (std::size_t i = 0; i < code.size(); ++i) {
                if (i) os << ',';
                os << '"' << code[i] << '"';
            }
            os << ']';
            return os.str();
        };
    });

    // reduce / trace
    auto* reduce_cmd = app.add_subcommand("reduce", "reduce a mutation word");
    reduce_cmd->add_option("--word", arg_word)->required();
    reduce_cmd->callback([&] {
        action = [&] { return word_to_json(reduce_word(parse_word_arg(arg_word))); };
    });

    auto* trace_cmd = app.add_subcommand("trace", "full reduction trace with ranks");
    trace_cmd->add_option("--word", arg_word)->required();
    trace_cmd->callback([&] {
        action = [&] {
            ReductionTrace t = reduction_trace(parse_word_arg(arg_word));
            std::ostringstream os;
            os << "{\"stages\":[";
            for (std::size_t i = 0; i < t.stages.size(); ++i) {
                if (i) os << ',';
                os << word_to_json(t.stages[i]);
            }
            os << "],\"rank\":" << (t.rank ? std::to_string(*t.rank) : "\"omega\"")
               << ",\"letter_rank\":{";
            bool first = true;
            for (const auto& [v, r] : t.letter_rank) {
                if (!first) os << ',';
                first = false;
                os << '"' << v << "\":" << r;
            }
            os << "}}";
            return os.str();
        };
    });

    // linking
    auto* linking_cmd = app.add_subcommand("linking", "linkedness of a vertex set");
    linking_cmd->add_option("--desc", arg_desc)->required();
    linking_cmd->add_option("--set", arg_set)->required();
    linking_cmd->callback([&] {
        action = [&] {
            return std::string(
                to_string(is_linked(load_descriptor(arg_desc), parse_set_arg(arg_set), horizon)));
        };
    });

    // build-seq
    auto* buildseq_cmd = app.add_subcommand("build-seq", "sequence from a linking family");
    buildseq_cmd->add_option("--family", arg_family)->required();
    buildseq_cmd->callback([&] {
        action = [&] {
            nlohmann::json j = nlohmann::json::parse(load_arg(arg_family));
            std::vector<VertexSet> sets;
            for (const auto& s : j.at("sets")) {
                VertexSet vs;
                for (const auto& v : s) vs.insert(v.get<Vertex>());
                sets.push_back(std::move(vs));
            }
            SequenceDescriptor d = family_concat(std::move(sets));
            TakenPrefix all = take(d, *d.total_length());
            std::ostringstream os;
            os << "{\"descriptor\":" << d.to_json() << ",\"word\":" << word_to_json(all.letters)
               << "}";
            return os.str();
        };
    });

    // cvec
    auto* cvec_cmd = app.add_subcommand("cvec", "c-vectors after a mutation word");
    cvec_cmd->add_option("--quiver", arg_quiver)->required();
    cvec_cmd->add_option("--word", arg_word)->required();
    cvec_cmd->callback([&] {
        action = [&] {
            FramedQuiver fq = mutate_framed_word(frame(load_quiver(arg_quiver)),
                                                 parse_word_arg(arg_word));
            std::ostringstream os;
            os << '{';
            bool first = true;
            for (Vertex x : fq.mutables()) {
                if (!first) os << ',';
                first = false;
                os << '"' << x << "\":{\"c\":" << cvector_json(c_vector(fq, x)) << ",\"color\":\""
                   << to_string(color(fq, x)) << "\"}";
            }
            os << '}';
            return os.str();
        };
    });

    // trajectory
    auto* traj_cmd = app.add_subcommand("trajectory", "apply a descriptor prefix");
    traj_cmd->add_option("--quiver", arg_quiver)->required();
    traj_cmd->add_option("--desc", arg_desc)->required();
    traj_cmd->add_option("--steps", arg_steps)->required();
    traj_cmd->add_option("--emit-every", arg_emit_every);
    traj_cmd->callback([&] {
        action = [&] {
            Trajectory t(load_quiver(arg_quiver), load_descriptor(arg_desc));
            std::ostringstream os;
            for (long long k = 0; k < arg_steps; ++k) {
                t.step();
                if (arg_emit_every > 0 && t.cursor() % arg_emit_every == 0)
                    os << quiver_output(t.current(), format) << "\n";
            }
            os << quiver_output(t.current(), format);
            return os.str();
        };
    });

    // certify
    auto* certify_cmd = app.add_subcommand("certify", "stabilization certificate");
    certify_cmd->add_option("--quiver", arg_quiver)->required();
    certify_cmd->add_option("--desc", arg_desc)->required();
    certify_cmd->add_option("--mode", arg_kind)->required()->check(CLI::IsMember({"weak", "strong"}));
    certify_cmd->add_option("--window", arg_set)->required();
    certify_cmd->callback([&] {
        action = [&] {
            Trajectory t(load_quiver(arg_quiver), load_descriptor(arg_desc));
            VertexSet window = parse_set_arg(arg_set);
            Certificate c = arg_kind == "weak" ? weak_certificate(t, window, horizon)
                                               : strong_certificate(t, window, horizon);
            return c.to_json();
        };
    });

    // classify-lf
    auto* classify_cmd = app.add_subcommand("classify-lf", "convergence trichotomy");
    classify_cmd->add_option("--desc", arg_desc)->required();
    classify_cmd->callback([&] {
        action = [&] { return classify_lf(load_descriptor(arg_desc), horizon).to_json(); };
    });

    // gadget
    auto* gadget_cmd = app.add_subcommand("gadget", "divergence gadgets");
    gadget_cmd->add_option("--kind", arg_kind)->required()->check(CLI::IsMember({"af", "lf"}));
    gadget_cmd->add_option("--desc", arg_desc)->required();
    gadget_cmd->add_option("--quiver", arg_quiver);
    gadget_cmd->add_option("--set", arg_set);
    gadget_cmd->add_option("--segments", arg_segments);
    gadget_cmd->add_option("--steps", arg_steps);
    gadget_cmd->callback([&] {
        action = [&] {
            VertexSet window = parse_set_arg(arg_set);
            SequenceDescriptor d = load_descriptor(arg_desc);
            std::ostringstream os;
            if (arg_kind == "af") {
                Quiver q = arg_quiver.empty() ? Quiver() : load_quiver(arg_quiver);
                AfGadgetReport rep = af_divergence_gadget(q, window, d,
                                                          arg_steps > 0 ? arg_steps : 50);
                os << "{\"extended\":" << quiver_to_json(rep.extended) << ",\"probes\":["
                   << rep.probe_a << ',' << rep.probe_b << "],\"easy_branch\":"
                   << (rep.easy_branch ? "true" : "false")
                   << ",\"verified_steps\":" << rep.verified_steps << "}";
            } else {
                LfGadgetReport rep = lf_divergence_gadget(d, window, arg_segments, horizon);
                os << "{\"gadget\":" << quiver_to_json(rep.gadget) << ",\"anchor\":" << rep.anchor
                   << ",\"boundaries\":[";
                for (std::size_t i = 0; i < rep.boundaries.size(); ++i) {
                    if (i) os << ',';
                    os << rep.boundaries[i];
                }
                os << "],\"anchor_counts\":[";
                for (std::size_t i = 0; i < rep.anchor_counts.size(); ++i) {
                    if (i) os << ',';
                    os << '"' << rep.anchor_counts[i] << '"';
                }
                os << "]}";
            }
            return os.str();
        };
    });

    // fraisse steer | baf
    auto* fraisse_cmd = app.add_subcommand("fraisse", "generic-quiver procedures");
    fraisse_cmd->require_subcommand(1);
    auto* steer_cmd = fraisse_cmd->add_subcommand("steer", "steer toward a target window");
    steer_cmd->add_option("--target", arg_target)->required();
    steer_cmd->add_option("--radius", arg_radius)->required();
    steer_cmd->callback([&] {
        action = [&] {
            GenericQuiver g(seed);
            Quiver target = load_quiver(arg_target);
            SteerReport rep = steer_toward(g, target, arg_radius);
            bool ok = verify_steering(g, rep, target, arg_radius);
            std::ostringstream os;
            os << "{\"word\":" << word_to_json(rep.word) << ",\"stage_ends\":[";
            for (std::size_t i = 0; i < rep.stage_ends.size(); ++i) {
                if (i) os << ',';
                os << rep.stage_ends[i];
            }
            os << "],\"verified\":" << (ok ? "true" : "false") << "}";
            return os.str();
        };
    });
    auto* baf_cmd = fraisse_cmd->add_subcommand("baf", "back-and-forth partial isomorphisms");
    baf_cmd->add_option("--at", arg_at)->required();
    baf_cmd->add_option("--stages", arg_stages)->required();
    baf_cmd->callback([&] {
        action = [&] {
            GenericQuiver g(seed);
            auto isos = back_and_forth(g, arg_at, arg_stages);
            std::ostringstream os;
            os << '[';
            for (std::size_t i = 0; i < isos.size(); ++i) {
                if (i) os << ',';
                os << "{\"stage\":" << isos[i].stage << ",\"pairs\":[";
                for (std::size_t p = 0; p < isos[i].pairs.size(); ++p) {
                    if (p) os << ',';
                    os << '[' << isos[i].pairs[p].first << ',' << isos[i].pairs[p].second << ']';
                }
                os << "]}";
            }
            os << ']';
            return os.str();
        };
    });

    // mutclass
    auto* mutclass_cmd = app.add_subcommand("mutclass", "bounded mutation-class exploration");
    mutclass_cmd->add_option("--quiver", arg_quiver)->required();
    mutclass_cmd->add_option("--max-weight", arg_max_weight);
    mutclass_cmd->add_option("--max-nodes", arg_max_nodes);
    mutclass_cmd->add_option("--dot", arg_dot);
    mutclass_cmd->callback([&] {
        action = [&] {
            MutationClassNode node = explore_class(load_quiver(arg_quiver), arg_max_weight,
                                                   arg_max_nodes);
            if (!arg_dot.empty()) write_file(arg_dot, node.to_dot());
            return node.to_json();
        };
    });

    // examples
    auto* examples_cmd = app.add_subcommand("examples", "reproduce the worked examples");
    bool paper_flag = false;
    examples_cmd->add_flag("--paper", paper_flag);
    examples_cmd->callback([&] {
        action = [&] {
            std::ostringstream os;
            bool ok = run_example_battery(os);
            if (!ok) throw MalformedCode("example regeneration failed");
            return os.str();
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        output.emit(out, action());
        return 0;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qm::cli
