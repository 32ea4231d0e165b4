#include "tacit/engine.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tacit/config_json.hpp"

namespace tacit {

namespace {

UtteranceId post(WorldState& w, ClaimId claim, NodeId author, const Utterance* parent) {
    Utterance u;
    u.id = static_cast<UtteranceId>(w.log.utterances.size());
    u.claim = claim;
    u.author = author;
    u.created_at = w.clock;
    if (parent) {
        u.parent = parent->id;
        u.root = parent->root;
        u.depth = parent->depth + 1;
    } else {
        u.root = u.id;
    }
    w.log.utterances.push_back(u);
    for (auto follower : w.graph->followers(author)) w.inbox[follower].push_back(u.id);
    return u.id;
}

// Inverse-CDF draw from unnormalized non-negative weights.
std::size_t draw_index(const Eigen::VectorXd& weights, Rng& rng) {
    const double total = weights.sum();
    double u = uniform01(rng) * total;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        u -= weights[i];
        if (u < 0.0) return static_cast<std::size_t>(i);
    }
    return static_cast<std::size_t>(weights.size() - 1);
}

}  // namespace

double update_belief(NodeId node, TopicId topic, int veracity, WorldState& w) {
    auto& n = w.num_read(node, topic);
    auto& b = w.belief(node, topic);
    b = update_belief(b, w.config.belief_learning_rate, n, veracity, w.impactedness(node, topic));
    ++n;
    return b;
}

double retweet_probability(NodeId node, const Utterance& u, const WorldState& w) {
    const auto& info = w.log.claims[u.claim];
    const double b = w.belief(node, info.topic);
    const double factor = info.veracity == 1 ? b : info.veracity == -1 ? 1.0 - b : 0.5;
    return std::min(1.0, w.config.retweet_scale * w.prestige[u.author] * info.virality * factor);
}

std::optional<UtteranceId> select_tweet(NodeId node, WorldState& w, Rng& rng) {
    const auto& cfg = w.config;
    const Eigen::VectorXd interest = w.impactedness.row(node).transpose();
    const TopicId topic = interest.sum() > 0.0 ? static_cast<TopicId>(draw_index(interest, rng))
                                               : static_cast<TopicId>(draw_index(Eigen::VectorXd::Ones(w.num_topics()), rng));

    int veracity = 1;
    if (w.kind[node] == NodeKind::Normal) {
        const double u = uniform01(rng);
        const double gamma = cfg.noise_tweet_share;
        veracity = u < gamma * w.belief(node, topic) ? 1 : u < gamma ? -1 : 0;
    }

    const int per_block = cfg.claims_per_topic_per_veracity;
    const ClaimId first = claim_block_start(topic, veracity, per_block);
    std::vector<ClaimId> open;
    open.reserve(static_cast<std::size_t>(per_block));
    for (ClaimId c = first; c < first + per_block; ++c)
        if (!w.claims[c].blocked) open.push_back(c);
    if (open.empty()) return std::nullopt;

    Eigen::VectorXd f(static_cast<Eigen::Index>(open.size()));
    for (std::size_t i = 0; i < open.size(); ++i) f[static_cast<Eigen::Index>(i)] = w.claims[open[i]].virality;
    const double r = veracity == 1 ? cfg.virality.r2 : cfg.virality.r1;
    const double q = veracity == 1 ? cfg.virality.q2 : cfg.virality.q1;
    const ClaimId chosen = open[draw_index(claim_choice_probabilities(f, r, q), rng)];
    return post(w, chosen, node, nullptr);
}

void step(WorldState& w) {
    const auto& g = *w.graph;
    const auto n = static_cast<NodeId>(w.num_nodes());
    const auto cap = static_cast<std::size_t>(w.config.inbox_read_cap);
    w.log.misinfo_reads.push_back(Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(g.num_communities()), w.num_topics()));
    auto& misinfo = w.log.misinfo_reads.back();

    for (NodeId j = 0; j < n; ++j) {
        Rng rng = substream(w.stream_seed, {static_cast<std::uint64_t>(w.clock), static_cast<std::uint64_t>(j)});
        auto& box = w.inbox[j];
        const bool awake = bernoulli(rng, w.config.wake_prob);
        w.wake[j] = awake;
        if (awake) {
            if (w.kind[j] == NodeKind::Bot || w.prestige[j] >= uniform01(rng)) select_tweet(j, w, rng);

            std::erase_if(box, [&](UtteranceId u) { return w.claims[w.log.utterances[u].claim].blocked; });
            const auto k = std::min(cap, box.size());
            for (std::size_t i = 0; i < k; ++i) {
                const auto pick = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(box.size() - i));
                std::swap(box[i], box[std::min(pick, box.size() - 1)]);

                const Utterance u = w.log.utterances[box[i]];
                const auto& info = w.log.claims[u.claim];
                w.log.reads.push_back({j, u.id, w.clock});
                if (info.veracity == 1) ++misinfo(g.community(j), info.topic);
                update_belief(j, info.topic, info.veracity, w);
                if (uniform01(rng) < retweet_probability(j, u, w)) post(w, u.claim, j, &u);
            }
        }
        box.clear();
    }
    ++w.clock;
}

void run(WorldState& w, TimeStep t_end, const StepHook& hook) {
    if (w.clock > t_end) throw Error("run: clock " + std::to_string(w.clock) + " already past t_end " + std::to_string(t_end));
    while (w.clock < t_end) {
        if (hook) hook(w);
        step(w);
    }
}

void record_belief_checkpoint(WorldState& w) { w.log.belief_checkpoints[w.clock] = w.belief; }

std::uint64_t SimLog::event_hash(TimeStep before) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::int64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= static_cast<std::uint64_t>(v >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& u : utterances) {
        if (u.created_at >= before) continue;
        for (auto v : {u.id, u.claim, u.author, u.created_at, u.parent, u.root, u.depth}) feed(v);
    }
    for (const auto& r : reads) {
        if (r.t >= before) continue;
        for (auto v : {r.node, r.utterance, r.t}) feed(v);
    }
    return h;
}

// ---------------------------------------------------------------- snapshots

namespace {

constexpr char kMagic[8] = {'T', 'A', 'C', 'I', 'T', 'S', 'N', 'P'};

class Writer {
public:
    template <typename T>
    void put(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        out_.append(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    template <typename T>
    void put_vec(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        if (!v.empty()) out_.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
    }
    template <typename M>
    void put_mat(const M& m) {
        put<std::int64_t>(m.rows());
        put<std::int64_t>(m.cols());
        out_.append(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(typename M::Scalar));
    }
    void put_str(const std::string& s) {
        put<std::uint64_t>(s.size());
        out_.append(s);
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& in) : in_(in) {}
    template <typename T>
    T get() {
        T v;
        need(sizeof(T));
        std::memcpy(&v, in_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    template <typename T>
    std::vector<T> get_vec() {
        const auto n = get<std::uint64_t>();
        need(n * sizeof(T));
        std::vector<T> v(n);
        if (n) std::memcpy(v.data(), in_.data() + pos_, n * sizeof(T));
        pos_ += n * sizeof(T);
        return v;
    }
    template <typename M>
    M get_mat() {
        const auto rows = get<std::int64_t>();
        const auto cols = get<std::int64_t>();
        M m(rows, cols);
        const auto bytes = static_cast<std::size_t>(rows * cols) * sizeof(typename M::Scalar);
        need(bytes);
        std::memcpy(m.data(), in_.data() + pos_, bytes);
        pos_ += bytes;
        return m;
    }
    std::string get_str() {
        const auto n = get<std::uint64_t>();
        need(n);
        std::string s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > in_.size()) throw Error("snapshot truncated");
    }
    const std::string& in_;
    std::size_t pos_ = 0;
};

struct PackedClaim {
    ClaimId id;
    TopicId topic;
    std::int8_t veracity;
    std::int8_t blocked;
    std::int8_t checked;
    std::int8_t pad = 0;
    TimeStep checked_at;
    double virality;
};

}  // namespace

Snapshot snapshot(const WorldState& w) {
    Writer out;
    out.put(kMagic);
    out.put(kSnapshotVersion);
    out.put_str(scenario_to_json(w.config).dump());
    out.put(w.stream_seed);
    out.put(w.clock);
    out.put_vec(w.kind);
    out.put_mat(w.belief);
    out.put_mat(w.impactedness);
    out.put_mat(Eigen::MatrixXd(w.prestige));
    out.put_mat(w.num_read);
    out.put<std::uint64_t>(w.inbox.size());
    for (const auto& box : w.inbox) out.put_vec(box);
    out.put_vec(w.wake);

    std::vector<PackedClaim> claims;
    for (const auto& c : w.claims)
        claims.push_back({c.id, c.topic, c.veracity, static_cast<std::int8_t>(c.blocked),
                          static_cast<std::int8_t>(c.fact_checked_at.has_value()), 0, c.fact_checked_at.value_or(-1),
                          c.virality});
    out.put_vec(claims);

    const auto& log = w.log;
    out.put<std::uint64_t>(log.claims.size());
    for (const auto& c : log.claims) {
        out.put(c.topic);
        out.put(c.veracity);
        out.put(c.virality);
    }
    out.put_vec(log.utterances);
    out.put_vec(log.reads);
    out.put_vec(log.fact_checks);
    out.put<std::uint64_t>(log.belief_checkpoints.size());
    for (const auto& [t, m] : log.belief_checkpoints) {
        out.put(t);
        out.put_mat(m);
    }
    out.put<std::uint64_t>(log.misinfo_reads.size());
    for (const auto& m : log.misinfo_reads) out.put_mat(m);
    return Snapshot{out.take()};
}

WorldState restore(const Snapshot& s, std::shared_ptr<const Graph> g) {
    Reader in(s.bytes);
    const auto magic = in.get<std::array<char, 8>>();
    if (std::memcmp(magic.data(), kMagic, 8) != 0) throw Error("not a snapshot");
    const auto version = in.get<std::uint32_t>();
    if (version != kSnapshotVersion)
        throw Error("snapshot version " + std::to_string(version) + " unsupported (expected " + std::to_string(kSnapshotVersion) + ")");

    WorldState w;
    w.graph = std::move(g);
    w.config = scenario_from_json(nlohmann::json::parse(in.get_str()));
    w.stream_seed = in.get<std::uint64_t>();
    w.clock = in.get<TimeStep>();
    w.kind = in.get_vec<NodeKind>();
    if (!w.graph || w.graph->num_nodes() != w.kind.size()) throw Error("snapshot does not match graph size");
    w.belief = in.get_mat<Eigen::MatrixXd>();
    w.impactedness = in.get_mat<Eigen::MatrixXd>();
    w.prestige = in.get_mat<Eigen::MatrixXd>();
    w.num_read = in.get_mat<decltype(w.num_read)>();
    w.inbox.resize(in.get<std::uint64_t>());
    for (auto& box : w.inbox) box = in.get_vec<UtteranceId>();
    w.wake = in.get_vec<std::uint8_t>();
    for (const auto& p : in.get_vec<PackedClaim>()) {
        Claim c{p.id, p.topic, p.veracity, p.virality, std::nullopt, p.blocked != 0};
        if (p.checked) c.fact_checked_at = p.checked_at;
        w.claims.push_back(c);
    }

    auto& log = w.log;
    log.claims.resize(in.get<std::uint64_t>());
    for (auto& c : log.claims) {
        c.topic = in.get<TopicId>();
        c.veracity = in.get<std::int8_t>();
        c.virality = in.get<double>();
    }
    log.utterances = in.get_vec<Utterance>();
    log.reads = in.get_vec<ReadEvent>();
    log.fact_checks = in.get_vec<FactCheckEvent>();
    for (auto n = in.get<std::uint64_t>(); n > 0; --n) {
        const auto t = in.get<TimeStep>();
        log.belief_checkpoints[t] = in.get_mat<Eigen::MatrixXd>();
    }
    log.misinfo_reads.resize(in.get<std::uint64_t>());
    for (auto& m : log.misinfo_reads) m = in.get_mat<Eigen::MatrixXi>();
    if (!in.done()) throw Error("snapshot has trailing bytes");
    return w;
}

void save_snapshot(const Snapshot& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(s.bytes.data(), static_cast<std::streamsize>(s.bytes.size()));
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return Snapshot{buf.str()};
}

}  // namespace tacit
