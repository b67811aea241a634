#include "gr1shield/controller.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gr1shield {

std::string spec_hash(const Spec& spec) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : print_spec(spec)) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

Controller Controller::solve(const Spec& source, GameOptions opts) {
    Controller c;
    c.source_ = source;
    c.binarized_ = binarize(source);
    auto game = std::make_shared<Game>(c.binarized_.spec, opts);
    c.game_ = game;
    bdd::Bdd w = winning_region_bdd(*game);
    c.realizable_ = is_realizable(*game, w);
    c.region_ = StateSet::from_bdd(*game, w);
    c.winning_ = w;
    c.hash_ = gr1shield::spec_hash(source);
    return c;
}

Controller Controller::synthesize(const Spec& source, GameOptions opts) {
    Controller c = solve(source, opts);
    if (!c.realizable_) throw UnrealizableError("specification is unrealizable");
    return c;
}

bool is_realizable(const Spec& source, GameOptions opts) {
    Binarized b = binarize(source);
    Game g(b.spec, opts);
    return is_realizable(g, winning_region_bdd(g));
}

std::size_t Controller::projected_region_size() const {
    const State mask = game_->spec_mask();
    std::vector<bool> seen(std::size_t{1} << game_->spec_bits(), false);
    std::size_t n = 0;
    for (State s = 0; s < region_.universe(); ++s) {
        if (!region_.contains(s)) continue;
        State p = s & mask;
        if (!seen[p]) {
            seen[p] = true;
            ++n;
        }
    }
    return n;
}

bool Controller::theta_e(State s) const { return game_->eval_state(game_->theta_e(), s); }
bool Controller::rho_e(State s, State t) const { return game_->eval_pair(game_->rho_e(), s, t); }
bool Controller::rho_s(State s, State t) const { return game_->eval_pair(game_->rho_s(), s, t); }

bool Controller::theta_hat(State s) const {
    if (!theta_e(s)) return true;
    return game_->eval_state(game_->theta_s(), s) && in_region(s);
}

bool Controller::rho_hat(State s, State t) const {
    if (!in_region(s) || !rho_e(s, t)) return true;
    return rho_s(s, t) && in_region(t);
}

bool Controller::allowed(State s, State t) const { return rho_s(s, t) && in_region(t); }

std::optional<State> Controller::initial_completion(State env_state) const {
    const State sys = game_->sys_mask();
    const State base = env_state & ~sys;
    // Enumerate sys completions in increasing numeric order of the sys bits.
    State sub = 0;
    for (;;) {
        State s = base | sub;
        if (game_->eval_state(game_->theta_s(), s) && in_region(s)) return s;
        if (sub == sys) break;
        sub = (sub - sys) & sys;
    }
    return std::nullopt;
}

State Controller::pack(const Assignment& values) const {
    Assignment b = binarized_.map.encode(values);
    State s = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i]) s |= State{1} << i;
    return s;
}

Assignment Controller::unpack(State s) const {
    Assignment b(binarized_.map.num_bits(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = (s >> i) & 1;
    return binarized_.map.decode(b);
}

State Controller::successor(State prev, State spec_bits) const {
    return (spec_bits & game_->spec_mask()) | game_->aux_successor(prev);
}

State Controller::initial_state(State spec_bits) const {
    return (spec_bits & game_->spec_mask()) | game_->initial_aux();
}

std::string Controller::serialize() const {
    std::ostringstream os;
    os << "gr1shield-controller 1\n";
    os << "spec_hash " << hash_ << "\n";
    os << "realizable " << (realizable_ ? 1 : 0) << "\n";
    os << "bits " << game_->num_bits() << "\n";
    for (unsigned b = 0; b < game_->num_bits(); ++b)
        os << "var " << b << ' ' << game_->bit_name(b) << ' ' << (game_->is_env_bit(b) ? "env" : "sys") << "\n";
    const auto& words = region_.words();
    os << "region " << region_.count() << ' ' << words.size() << "\n";
    for (std::size_t i = 0; i < words.size(); ++i) {
        os << std::hex << std::setw(16) << std::setfill('0') << words[i] << std::dec;
        os << ((i % 4 == 3 || i + 1 == words.size()) ? '\n' : ' ');
    }
    os << "spec\n" << print_spec(source_) << "end\n";
    return os.str();
}

void Controller::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write controller file '" + path + "'");
    out << serialize();
}

Controller Controller::deserialize(const std::string& text, GameOptions opts) {
    std::istringstream in(text);
    std::string word;
    int version = 0;
    in >> word >> version;
    if (word != "gr1shield-controller" || version != 1) throw std::runtime_error("not a controller file (version 1)");
    std::string hash;
    int realizable = 0;
    unsigned bits = 0;
    in >> word >> hash;
    in >> word >> realizable;
    in >> word >> bits;
    std::vector<std::string> names(bits);
    for (unsigned b = 0; b < bits; ++b) {
        unsigned idx;
        std::string owner;
        in >> word >> idx >> names[b] >> owner;
        if (word != "var" || idx != b) throw std::runtime_error("malformed controller variable table");
    }
    std::size_t count = 0, nwords = 0;
    in >> word >> count >> nwords;
    if (word != "region") throw std::runtime_error("malformed controller region header");
    std::vector<std::uint64_t> words(nwords);
    for (auto& w : words) in >> std::hex >> w >> std::dec;
    in >> word;
    if (word != "spec") throw std::runtime_error("malformed controller spec section");
    std::string line, spec_text;
    std::getline(in, line);
    while (std::getline(in, line) && line != "end") spec_text += line + "\n";

    Controller c;
    c.source_ = parse_spec(spec_text);
    c.hash_ = gr1shield::spec_hash(c.source_);
    if (c.hash_ != hash) throw std::runtime_error("controller spec hash mismatch");
    c.binarized_ = binarize(c.source_);
    auto game = std::make_shared<Game>(c.binarized_.spec, opts);
    if (game->num_bits() != bits) throw std::runtime_error("controller bit layout mismatch");
    for (unsigned b = 0; b < bits; ++b)
        if (game->bit_name(b) != names[b]) throw std::runtime_error("controller bit layout mismatch");
    c.game_ = game;
    c.region_ = StateSet(bits);
    if (c.region_.words().size() != nwords) throw std::runtime_error("controller region size mismatch");
    c.region_.words() = words;
    if (c.region_.count() != count) throw std::runtime_error("controller region checksum mismatch");
    c.realizable_ = realizable != 0;
    return c;
}

Controller Controller::load(const std::string& path, GameOptions opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open controller file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str(), opts);
}

}  // namespace gr1shield
