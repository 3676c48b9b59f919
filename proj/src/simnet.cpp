#include "lisa/simnet.hpp"

#include <algorithm>
#include <sstream>

namespace lisa::simnet {

namespace {

constexpr std::size_t kNoActor = static_cast<std::size_t>(-1);

void flip(Bytes& bytes, std::size_t bit) {
    if(bit / 8 < bytes.size()) {
        bytes[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
    }
}

} // namespace

std::string_view to_string(ChannelKind k) noexcept {
    return k == ChannelKind::Secure ? "secure" : "open";
}

std::string_view to_string(Direction d) noexcept {
    switch(d) {
        case Direction::Send: return "send";
        case Direction::Receive: return "recv";
        case Direction::Local: return "local";
    }
    return "?";
}

std::string_view to_string(Verdict v) noexcept {
    switch(v) {
        case Verdict::Delivered: return "delivered";
        case Verdict::Dropped: return "dropped";
        case Verdict::Modified: return "modified";
        case Verdict::Injected: return "injected";
        case Verdict::Replayed: return "replayed";
        case Verdict::Undeliverable: return "undeliverable";
        case Verdict::Disconnect: return "disconnect";
        case Verdict::Note: return "note";
    }
    return "?";
}

std::string Trace::dump() const {
    std::ostringstream out;
    for(const auto& ev : events_) {
        out << ev.time << ' ' << ev.seq << ' ' << ev.actor << ' ' << to_string(ev.dir) << ' ' << to_string(ev.kind)
            << ' ' << to_string(ev.verdict) << ' ' << (ev.payload.empty() ? "-" : hex_encode(ev.payload));
        if(!ev.note.empty()) {
            out << ' ' << ev.note;
        }
        out << '\n';
    }
    return out.str();
}

void LogicalClock::advance_to(std::uint32_t t) {
    if(t < now_) {
        throw Error(ErrorCode::InvalidState, "logical clock cannot move backwards");
    }
    now_ = t;
}

AdversaryScript& AdversaryScript::observe() {
    rules_.push_back(Rule{});
    return *this;
}

AdversaryScript& AdversaryScript::drop(std::uint64_t index) {
    Rule r;
    r.kind = Rule::Kind::Drop;
    r.index = index;
    rules_.push_back(std::move(r));
    return *this;
}

AdversaryScript& AdversaryScript::replay(std::uint64_t index, std::uint32_t at_time, std::string to) {
    Rule r;
    r.kind = Rule::Kind::Replay;
    r.index = index;
    r.at_time = at_time;
    r.to = std::move(to);
    rules_.push_back(std::move(r));
    return *this;
}

AdversaryScript& AdversaryScript::flip_bits(std::uint64_t index, std::vector<std::size_t> positions) {
    Rule r;
    r.kind = Rule::Kind::FlipBits;
    r.index = index;
    r.positions = std::move(positions);
    rules_.push_back(std::move(r));
    return *this;
}

AdversaryScript& AdversaryScript::inject(Bytes payload, std::string from, std::string to, std::uint32_t at_time) {
    Rule r;
    r.kind = Rule::Kind::Inject;
    r.bytes = std::move(payload);
    r.from = std::move(from);
    r.to = std::move(to);
    r.at_time = at_time;
    rules_.push_back(std::move(r));
    return *this;
}

AdversaryScript& AdversaryScript::substitute_origin(std::uint64_t index, std::string origin) {
    Rule r;
    r.kind = Rule::Kind::SubstituteOrigin;
    r.index = index;
    r.from = std::move(origin);
    rules_.push_back(std::move(r));
    return *this;
}

Timestamp Context::now() const noexcept {
    return net_->clock_.now();
}

Rng& Context::rng() noexcept {
    return net_->rng_;
}

const std::string& Context::self() const noexcept {
    return actor_->name();
}

void Context::send(const std::string& to, ChannelKind kind, Bytes payload) {
    net_->send_from(*actor_, to, kind, std::move(payload));
}

void Context::schedule(std::uint32_t delay, std::uint64_t tag) {
    Network::Event ev;
    ev.time = net_->clock_.now().seconds + delay;
    ev.type = Network::EventType::Timer;
    ev.actor = net_->index_of(actor_->name());
    ev.tag = tag;
    net_->push(std::move(ev));
}

void Context::disconnect(std::string_view reason) {
    ++net_->result_.disconnects;
    net_->trace(actor_->name(), Direction::Local, ChannelKind::Open, Verdict::Disconnect, {}, std::string(reason));
}

void Context::note(std::string_view text) {
    net_->trace(actor_->name(), Direction::Local, ChannelKind::Open, Verdict::Note, {}, std::string(text));
}

Actor* ScenarioResult::find(std::string_view name) const {
    for(const auto& a : actors) {
        if(a->name() == name) {
            return a.get();
        }
    }
    return nullptr;
}

Network::Network(std::uint64_t seed, NetworkOptions options)
    : rng_(seed), options_(options), clock_(options.start_time) {}

Actor& Network::add(std::unique_ptr<Actor> actor) {
    if(index_of(actor->name()) != kNoActor) {
        throw Error(ErrorCode::InvalidConfig, "duplicate actor name '" + actor->name() + "'");
    }
    actors_.push_back(std::move(actor));
    return *actors_.back();
}

std::size_t Network::index_of(const std::string& name) const {
    for(std::size_t i = 0; i != actors_.size(); ++i) {
        if(actors_[i]->name() == name) {
            return i;
        }
    }
    return kNoActor;
}

void Network::push(Event ev) {
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
}

void Network::trace(std::string actor, Direction dir, ChannelKind kind, Verdict verdict, Bytes payload,
                    std::string note) {
    TraceEvent ev;
    ev.time = clock_.now().seconds;
    ev.seq = result_.trace.events().size();
    ev.actor = std::move(actor);
    ev.dir = dir;
    ev.kind = kind;
    ev.verdict = verdict;
    ev.payload = std::move(payload);
    ev.note = std::move(note);
    result_.trace.append(std::move(ev));
}

void Network::send_from(Actor& actor, const std::string& to, ChannelKind kind, Bytes payload) {
    Event ev;
    ev.type = EventType::Deliver;
    ev.env.from = actor.name();
    ev.env.to = to;
    ev.env.kind = kind;
    const std::uint32_t now = clock_.now().seconds;

    if(kind == ChannelKind::Secure) {
        trace(actor.name(), Direction::Send, kind, Verdict::Delivered, payload, "to=" + to);
        ev.env.payload = std::move(payload);
        ev.time = now + options_.secure_delay;
        push(std::move(ev));
        return;
    }

    const std::uint64_t index = ++open_count_;
    ev.env.open_index = index;
    result_.adversary_log.push_back(Observation{now, index, actor.name(), to, payload});

    Bytes original = payload;
    bool dropped = false;
    bool modified = false;
    for(const Rule& rule : script_->rules()) {
        if(rule.index != index) {
            continue;
        }
        switch(rule.kind) {
            case Rule::Kind::Drop:
                dropped = true;
                break;
            case Rule::Kind::FlipBits:
                for(std::size_t bit : rule.positions) {
                    flip(payload, bit);
                }
                modified = true;
                break;
            case Rule::Kind::SubstituteOrigin:
                ev.env.from = rule.from;
                modified = true;
                break;
            case Rule::Kind::Replay: {
                Event copy;
                copy.type = EventType::Deliver;
                copy.time = std::max(rule.at_time, now);
                copy.env.from = actor.name();
                copy.env.to = rule.to.empty() ? to : rule.to;
                copy.env.kind = ChannelKind::Open;
                copy.env.payload = original;
                copy.verdict = Verdict::Replayed;
                push(std::move(copy));
                break;
            }
            case Rule::Kind::Observe:
            case Rule::Kind::Inject:
                break;
        }
    }

    const Verdict verdict = dropped ? Verdict::Dropped : (modified ? Verdict::Modified : Verdict::Delivered);
    trace(actor.name(), Direction::Send, kind, verdict, original, "to=" + to);
    if(dropped) {
        ++result_.drops;
        return;
    }
    ev.env.payload = std::move(payload);
    ev.verdict = verdict;
    ev.time = now + options_.open_delay;
    push(std::move(ev));
}

ScenarioResult Network::run(const AdversaryScript& script) {
    script_ = &script;
    for(std::size_t i = 0; i != actors_.size(); ++i) {
        Event ev;
        ev.time = options_.start_time;
        ev.type = EventType::Start;
        ev.actor = i;
        push(std::move(ev));
    }
    for(const Rule& rule : script.rules()) {
        if(rule.kind != Rule::Kind::Inject) {
            continue;
        }
        Event ev;
        ev.type = EventType::Deliver;
        ev.time = std::max(rule.at_time, options_.start_time);
        ev.env.from = rule.from;
        ev.env.to = rule.to;
        ev.env.kind = ChannelKind::Open;
        ev.env.payload = rule.bytes;
        ev.verdict = Verdict::Injected;
        push(std::move(ev));
    }

    while(!queue_.empty()) {
        Event ev = queue_.top();
        queue_.pop();
        clock_.advance_to(ev.time);

        switch(ev.type) {
            case EventType::Start: {
                Context ctx{*this, *actors_[ev.actor]};
                actors_[ev.actor]->start(ctx);
                break;
            }
            case EventType::Timer: {
                Context ctx{*this, *actors_[ev.actor]};
                actors_[ev.actor]->on_timer(ctx, ev.tag);
                break;
            }
            case EventType::Deliver: {
                const std::size_t dst = index_of(ev.env.to);
                if(dst == kNoActor) {
                    ++result_.undeliverable;
                    trace(ev.env.to, Direction::Receive, ev.env.kind, Verdict::Undeliverable, ev.env.payload,
                          "from=" + ev.env.from);
                    break;
                }
                trace(ev.env.to, Direction::Receive, ev.env.kind, ev.verdict, ev.env.payload, "from=" + ev.env.from);
                Context ctx{*this, *actors_[dst]};
                actors_[dst]->on_message(ctx, ev.env);
                break;
            }
        }
    }

    std::string stuck;
    for(const auto& a : actors_) {
        if(a->mid_handshake()) {
            stuck += (stuck.empty() ? "" : ",") + a->name();
        }
    }
    const bool explained = result_.drops != 0 || result_.disconnects != 0;
    if(!stuck.empty() && (!explained || result_.undeliverable != 0)) {
        throw Error(ErrorCode::ScenarioDeadlock, "no events left while mid-handshake: " + stuck);
    }

    result_.actors = std::move(actors_);
    script_ = nullptr;
    return std::move(result_);
}

ScenarioResult run_scenario(std::vector<std::unique_ptr<Actor>> actors, const AdversaryScript& script,
                            std::uint64_t seed, NetworkOptions options) {
    Network net(seed, options);
    for(auto& a : actors) {
        net.add(std::move(a));
    }
    return net.run(script);
}

} // namespace lisa::simnet
