#include "lisa/actors.hpp"

namespace lisa::simnet {

namespace {

Bytes tagged(std::uint8_t tag, Bytes body) {
    body.insert(body.begin(), tag);
    return body;
}

} // namespace

TtpActor::TtpActor(std::string name, std::shared_ptr<TrustedThirdParty> ttp, std::vector<std::string> providers)
    : Actor(std::move(name)), ttp_(std::move(ttp)), providers_(std::move(providers)) {}

void TtpActor::on_message(Context& ctx, const Envelope& env) {
    if(env.kind != ChannelKind::Secure || env.payload.empty() || env.payload[0] != kTagRegRequest) {
        ctx.note("ignored non-registration traffic");
        return;
    }
    const auto& params = ttp_->params();
    try {
        const auto req = RegistrationRequest::decode(std::span(env.payload).subspan(1), params);
        const RegistrationResponse resp = ttp_->issue(req, ctx.rng());
        ++issued_;
        ctx.send(env.from, ChannelKind::Secure, tagged(kTagRegResponse, resp.encode(params)));
        const RegistrationRecord& rec = ttp_->issued().at(req.id.value);
        for(const auto& sp : providers_) {
            ctx.send(sp, ChannelKind::Secure, tagged(kTagRecordPush, encode_record(rec, params)));
        }
    } catch(const Error& e) {
        ctx.note(std::string("registration refused: ") + e.what());
    }
}

SmActor::SmActor(std::string name, DomainParams params, Credential cred, Options options)
    : Actor(std::move(name)), params_(std::move(params)), id_(cred.id), options_(std::move(options)),
      cred_(std::move(cred)) {}

SmActor::SmActor(std::string name, DomainParams params, Identity id, Options options)
    : Actor(std::move(name)), params_(std::move(params)), id_(id), options_(std::move(options)) {}

void SmActor::start(Context& ctx) {
    if(cred_) {
        schedule_handshakes(ctx);
        return;
    }
    const PendingRegistration pending = register_begin(params_, id_, ctx.rng());
    pending_r_a_ = pending.r_a;
    ctx.send(options_.ttp, ChannelKind::Secure, tagged(kTagRegRequest, pending.request.encode(params_)));
}

void SmActor::schedule_handshakes(Context& ctx) {
    for(std::size_t i = 0; i != options_.handshakes.size(); ++i) {
        ctx.schedule(options_.handshakes[i], i);
    }
}

void SmActor::on_message(Context& ctx, const Envelope& env) {
    if(env.kind == ChannelKind::Secure) {
        if(!pending_r_a_ || env.payload.empty() || env.payload[0] != kTagRegResponse) {
            ++unexpected_;
            ctx.note("unexpected secure message");
            return;
        }
        try {
            const auto resp = RegistrationResponse::decode(std::span(env.payload).subspan(1), params_);
            cred_ = register_finish(params_, id_, *pending_r_a_, resp);
            pending_r_a_.reset();
            ctx.note("registered");
            schedule_handshakes(ctx);
        } catch(const Error& e) {
            pending_r_a_.reset();
            ctx.note(std::string("registration failed: ") + e.what());
        }
        return;
    }

    if(runs_.empty() || runs_.back().session.state() != SmState::Sent) {
        ++unexpected_;
        ctx.note("no handshake awaiting a response");
        return;
    }
    SmRun& run = runs_.back();
    try {
        const AuthResponse resp = decode_response(env.payload);
        run.session.finalize(resp, ctx.now(), &run.counters);
        ctx.note("established");
    } catch(const Error& e) {
        if(run.session.state() == SmState::Sent) {
            // Malformed response: the session stays open for a well-formed one.
            ctx.note(std::string("discarded: ") + e.what());
            return;
        }
        ctx.disconnect(to_string(e.code()));
    }
}

void SmActor::on_timer(Context& ctx, std::uint64_t tag) {
    if(!cred_) {
        return;
    }
    SmRun run{SmSession(params_, *cred_, options_.provider_q, options_.config), OpCounters{}, Bytes{}};
    const AuthRequest req = tag < options_.forced_r_sm.size()
                                ? run.session.initiate_with(options_.forced_r_sm[tag], ctx.now(), &run.counters)
                                : run.session.initiate(ctx.now(), ctx.rng(), &run.counters);
    run.request = encode_msg(req, run.session.layout());
    Bytes wire = run.request;
    runs_.push_back(std::move(run));
    ctx.send(options_.provider, ChannelKind::Open, std::move(wire));
}

bool SmActor::mid_handshake() const {
    if(pending_r_a_) {
        return true;
    }
    for(const auto& r : runs_) {
        if(r.session.state() == SmState::Sent) {
            return true;
        }
    }
    return false;
}

SpActor::SpActor(std::string name, DomainParams params, Credential self, std::shared_ptr<Directory> directory,
                 HandshakeConfig config, std::shared_ptr<ReplayCache> cache)
    : Actor(std::move(name)), params_(std::move(params)), self_(std::move(self)), directory_(std::move(directory)),
      config_(config), cache_(std::move(cache)) {}

void SpActor::on_message(Context& ctx, const Envelope& env) {
    if(env.kind == ChannelKind::Secure) {
        if(env.payload.empty() || env.payload[0] != kTagRecordPush) {
            ctx.note("unexpected secure message");
            return;
        }
        try {
            directory_->insert(decode_record(std::span(env.payload).subspan(1), params_));
        } catch(const Error& e) {
            ctx.note(std::string("record rejected: ") + e.what());
        }
        return;
    }

    SpRun& run = runs_.emplace_back();
    run.request = env.payload;
    const std::uint64_t lookups_before = directory_->lookups();
    try {
        const WireLayout layout = WireLayout::make(params_, config_.wire);
        const AuthRequest req = decode_request(env.payload, layout);
        run.session.emplace(params_, self_, *directory_, config_);
        const AuthResponse resp = run.session->respond(req, ctx.now(), cache_.get(), &run.counters);
        run.directory_lookups = directory_->lookups() - lookups_before;
        ctx.send(env.from, ChannelKind::Open, encode_msg(resp));
    } catch(const Error& e) {
        run.directory_lookups = directory_->lookups() - lookups_before;
        run.failure = e.code();
        ctx.disconnect(to_string(e.code()));
    }
}

OpCounters SpActor::total_counters() const {
    OpCounters total;
    for(const auto& r : runs_) {
        total += r.counters;
    }
    return total;
}

Deployment provision(const CurveParams& curve, std::size_t meters, std::uint64_t seed) {
    Rng rng(seed);
    Deployment d;
    d.ttp = std::make_shared<TrustedThirdParty>(TrustedThirdParty::setup(curve, rng));
    d.directory = std::make_shared<Directory>();
    d.provider = enroll(*d.ttp, Identity{kProviderId}, rng);
    for(std::size_t i = 0; i != meters; ++i) {
        d.meters.push_back(enroll(*d.ttp, Identity{kFirstMeterId + static_cast<std::uint32_t>(i)}, rng));
        d.directory->insert(d.ttp->issued().at(d.meters.back().id.value));
    }
    return d;
}

ScenarioResult run_handshakes(const Deployment& d, const HandshakePlan& plan, const AdversaryScript& script,
                              std::uint64_t seed) {
    SmActor::Options opts;
    opts.provider = kProviderName;
    opts.provider_q = d.provider.q;
    opts.config = plan.config;
    opts.handshakes = plan.at;
    opts.forced_r_sm = plan.forced_r_sm;
    auto cache = plan.cache ? plan.cache : std::make_shared<ReplayCache>(plan.config.window);

    Network net(seed, plan.network);
    net.add(std::make_unique<SmActor>(kMeterName, d.params(), d.meters.at(plan.meter), std::move(opts)));
    net.add(std::make_unique<SpActor>(kProviderName, d.params(), d.provider, d.directory, plan.config,
                                      std::move(cache)));
    return net.run(script);
}

} // namespace lisa::simnet
