#pragma once

// Deterministic in-process network: a single-threaded discrete-event loop, a
// logical clock, secure and open channels, and an adversary interposed on
// every open-channel send.
//
// Ordering is total: events run by (time, sequence number), and every random
// draw comes from one generator seeded by the scenario seed, so a seed fully
// determines the trace.

#include "lisa/bigint.hpp"
#include "lisa/error.hpp"
#include "lisa/prims.hpp"
#include "lisa/rng.hpp"

#include <cstdint>
#include <memory>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

namespace lisa::simnet {

enum class ChannelKind : std::uint8_t { Secure, Open };
enum class Direction : std::uint8_t { Send, Receive, Local };
enum class Verdict : std::uint8_t { Delivered, Dropped, Modified, Injected, Replayed, Undeliverable, Disconnect, Note };

std::string_view to_string(ChannelKind k) noexcept;
std::string_view to_string(Direction d) noexcept;
std::string_view to_string(Verdict v) noexcept;

struct Envelope {
    std::string from;
    std::string to;
    ChannelKind kind = ChannelKind::Open;
    Bytes payload;
    /// 1-based position among open-channel sends; 0 for secure and adversary traffic.
    std::uint64_t open_index = 0;
};

struct TraceEvent {
    std::uint32_t time = 0;
    std::uint64_t seq = 0;
    std::string actor;
    Direction dir = Direction::Local;
    ChannelKind kind = ChannelKind::Open;
    Verdict verdict = Verdict::Note;
    Bytes payload;
    std::string note;
};

/// Append-only event log.
class Trace {
  public:
    void append(TraceEvent ev) { events_.push_back(std::move(ev)); }
    const std::vector<TraceEvent>& events() const noexcept { return events_; }

    /// One line per event: time seq actor dir channel verdict hex [note].
    std::string dump() const;

  private:
    std::vector<TraceEvent> events_;
};

class LogicalClock {
  public:
    explicit LogicalClock(std::uint32_t start = 0) : now_(start) {}

    Timestamp now() const noexcept { return Timestamp{now_}; }
    void advance(std::uint32_t delta) { now_ += delta; }
    /// Throws Error(InvalidState) if t is in the past.
    void advance_to(std::uint32_t t);

  private:
    std::uint32_t now_;
};

/// One interposition rule. Indices refer to open-channel messages, 1-based,
/// in send order.
struct Rule {
    enum class Kind { Observe, Drop, Replay, FlipBits, Inject, SubstituteOrigin };

    Kind kind = Kind::Observe;
    std::uint64_t index = 0;
    std::uint32_t at_time = 0;
    std::vector<std::size_t> positions; // bit 0 = most significant bit of byte 0
    Bytes bytes;
    std::string from;
    std::string to;
};

class AdversaryScript {
  public:
    /// Observation of every open-channel message is unconditional; this rule
    /// only documents intent in a script.
    AdversaryScript& observe();
    AdversaryScript& drop(std::uint64_t index);
    /// Re-deliver a copy of message `index` at absolute time `at_time`
    /// (to its original destination unless `to` is given).
    AdversaryScript& replay(std::uint64_t index, std::uint32_t at_time, std::string to = {});
    AdversaryScript& flip_bits(std::uint64_t index, std::vector<std::size_t> positions);
    AdversaryScript& inject(Bytes payload, std::string from, std::string to, std::uint32_t at_time);
    /// Deliver message `index` as if it came from `origin`; replies route there.
    AdversaryScript& substitute_origin(std::uint64_t index, std::string origin);

    const std::vector<Rule>& rules() const noexcept { return rules_; }

  private:
    std::vector<Rule> rules_;
};

/// What the adversary saw on the open channel, before its own modifications.
struct Observation {
    std::uint32_t time = 0;
    std::uint64_t index = 0;
    std::string from;
    std::string to;
    Bytes payload;
};

class Network;
class Context;

class Actor {
  public:
    explicit Actor(std::string name) : name_(std::move(name)) {}
    virtual ~Actor() = default;

    const std::string& name() const noexcept { return name_; }

    virtual void start(Context&) {}
    virtual void on_message(Context& ctx, const Envelope& env) = 0;
    virtual void on_timer(Context&, std::uint64_t) {}

    /// True while this actor waits on a peer inside a handshake.
    virtual bool mid_handshake() const { return false; }

  private:
    std::string name_;
};

/// Handle an actor uses during one callback. The clock is constant for the
/// duration of the callback.
class Context {
  public:
    Timestamp now() const noexcept;
    Rng& rng() noexcept;
    const std::string& self() const noexcept;

    void send(const std::string& to, ChannelKind kind, Bytes payload);
    void schedule(std::uint32_t delay, std::uint64_t tag);
    /// Silent on the wire; recorded in the trace.
    void disconnect(std::string_view reason);
    void note(std::string_view text);

  private:
    friend class Network;
    Context(Network& net, Actor& actor) : net_(&net), actor_(&actor) {}

    Network* net_;
    Actor* actor_;
};

struct NetworkOptions {
    std::uint32_t start_time = 1000;
    std::uint32_t secure_delay = 0;
    std::uint32_t open_delay = 0;
};

struct ScenarioResult {
    Trace trace;
    std::vector<Observation> adversary_log;
    std::vector<std::unique_ptr<Actor>> actors;
    std::uint64_t drops = 0;
    std::uint64_t disconnects = 0;
    std::uint64_t undeliverable = 0;

    Actor* find(std::string_view name) const;

    template <typename T>
    T& actor(std::string_view name) const {
        auto* a = dynamic_cast<T*>(find(name));
        if(a == nullptr) {
            throw Error(ErrorCode::InvalidState, "no actor '" + std::string(name) + "' of the requested type");
        }
        return *a;
    }
};

class Network {
  public:
    explicit Network(std::uint64_t seed, NetworkOptions options = {});

    Actor& add(std::unique_ptr<Actor> actor);

    /// Runs the event loop to quiescence. Throws Error(ScenarioDeadlock) if an
    /// actor is left mid-handshake with no drop, disconnect or lost message to
    /// account for it.
    ScenarioResult run(const AdversaryScript& script);

  private:
    friend class Context;

    enum class EventType { Start, Deliver, Timer };
    struct Event {
        std::uint32_t time = 0;
        std::uint64_t seq = 0;
        EventType type = EventType::Start;
        std::size_t actor = 0;
        std::uint64_t tag = 0;
        Envelope env;
        Verdict verdict = Verdict::Delivered;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const noexcept {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    void push(Event ev);
    void trace(std::string actor, Direction dir, ChannelKind kind, Verdict verdict, Bytes payload,
               std::string note = {});
    void send_from(Actor& actor, const std::string& to, ChannelKind kind, Bytes payload);
    std::size_t index_of(const std::string& name) const;

    Rng rng_;
    NetworkOptions options_;
    LogicalClock clock_;
    std::vector<std::unique_ptr<Actor>> actors_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t open_count_ = 0;
    const AdversaryScript* script_ = nullptr;
    ScenarioResult result_;
};

/// Builds a network from `actors`, runs `script` under `seed`.
ScenarioResult run_scenario(std::vector<std::unique_ptr<Actor>> actors, const AdversaryScript& script,
                            std::uint64_t seed, NetworkOptions options = {});

} // namespace lisa::simnet
