#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repute/common/bigint.hpp"

// Two-by-two feedback games between a buyer and a seller who each feel the
// other deserves a positive or a negative rating. Payoffs are exact
// rationals so equilibrium predicates are exact inequalities with no
// tolerance knob.
namespace repute::game {

enum class FeedbackAction { Positive, Negative };

inline char action_char(FeedbackAction a) {
    return a == FeedbackAction::Positive ? 'P' : 'N';
}

inline int action_sign(FeedbackAction a) {
    return a == FeedbackAction::Positive ? 1 : -1;
}

inline FeedbackAction parse_action(char c) {
    if (c == 'P' || c == 'p') return FeedbackAction::Positive;
    if (c == 'N' || c == 'n') return FeedbackAction::Negative;
    throw std::invalid_argument("parse_action: expected P or N");
}

enum class Player { Alice, Bob };

inline Player other_player(Player p) {
    return p == Player::Alice ? Player::Bob : Player::Alice;
}

struct TieError : std::runtime_error {
    explicit TieError(const std::string& what) : std::runtime_error(what) {}
};

// a payoff comparison came out exactly equal between regimes the analysis
// needs to keep apart
struct MixedRegimeError : std::runtime_error {
    explicit MixedRegimeError(const std::string& what) : std::runtime_error(what) {}
};

// (delta, f, r): reputation utility, altruism utility, revenge utility.
// Revenge plus altruism never outweighs a lost reputation: r + f < delta.
struct PlayerParams {
    Rational delta;
    Rational f;
    Rational r;

    PlayerParams(Rational delta_, Rational f_, Rational r_)
        : delta(std::move(delta_)), f(std::move(f_)), r(std::move(r_)) {
        if (delta < 0 || f < 0 || r < 0) {
            throw std::invalid_argument("PlayerParams: delta, f, r must be nonnegative");
        }
        if (this->r + this->f >= this->delta) {
            throw std::invalid_argument("PlayerParams: requires r + f < delta");
        }
    }
};

// wanted_A is the feedback Alice feels Bob deserves, and vice versa
struct GameSpec {
    FeedbackAction wanted_alice;
    FeedbackAction wanted_bob;
    PlayerParams params_alice;
    PlayerParams params_bob;
};

using PayoffPair = std::pair<Rational, Rational>;  // (u_alice, u_bob)
using ActionProfile = std::pair<FeedbackAction, FeedbackAction>;

struct PayoffMatrix {
    // indexed [alice action][bob action], 0 = P, 1 = N
    std::array<std::array<PayoffPair, 2>, 2> entries;

    const PayoffPair& at(FeedbackAction alice, FeedbackAction bob) const {
        return entries[alice == FeedbackAction::Positive ? 0 : 1]
                      [bob == FeedbackAction::Positive ? 0 : 1];
    }
};

enum class GameClass {
    StrictCooperation,
    StagHunt,
    OneSidedDominance,
    PrisonersDilemma,
};

inline std::string game_class_name(GameClass c) {
    switch (c) {
        case GameClass::StrictCooperation: return "strict-cooperation";
        case GameClass::StagHunt: return "stag-hunt";
        case GameClass::OneSidedDominance: return "one-sided-dominance";
        case GameClass::PrisonersDilemma: return "prisoners-dilemma";
    }
    return "?";
}

// One player's payoff: reputation swings with the feedback received, altruism
// pays when the own feedback matches what the other deserves, and revenge
// pays for answering a negative with a negative.
inline Rational payoff(const PlayerParams& params, FeedbackAction wanted,
                       FeedbackAction own, FeedbackAction other) {
    Rational u = params.delta * action_sign(other);
    if (own == wanted) {
        u += params.f;
    }
    if (own == FeedbackAction::Negative && other == FeedbackAction::Negative) {
        u += params.r;
    }
    return u;
}

inline PayoffMatrix build_matrix(const GameSpec& spec) {
    static const FeedbackAction acts[2] = {FeedbackAction::Positive, FeedbackAction::Negative};
    PayoffMatrix m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m.entries[i][j] = {
                payoff(spec.params_alice, spec.wanted_alice, acts[i], acts[j]),
                payoff(spec.params_bob, spec.wanted_bob, acts[j], acts[i]),
            };
        }
    }
    return m;
}

// pure-strategy Nash equilibria; ties count as best responses
inline std::vector<ActionProfile> pure_nash(const PayoffMatrix& m) {
    static const FeedbackAction acts[2] = {FeedbackAction::Positive, FeedbackAction::Negative};
    std::vector<ActionProfile> out;
    for (FeedbackAction a : acts) {
        for (FeedbackAction b : acts) {
            FeedbackAction a_dev = a == acts[0] ? acts[1] : acts[0];
            FeedbackAction b_dev = b == acts[0] ? acts[1] : acts[0];
            bool alice_best = m.at(a, b).first >= m.at(a_dev, b).first;
            bool bob_best = m.at(a, b).second >= m.at(a, b_dev).second;
            if (alice_best && bob_best) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

inline GameClass classify(const GameSpec& spec) {
    if (spec.params_alice.r == spec.params_alice.f ||
        spec.params_bob.r == spec.params_bob.f) {
        throw TieError("classify: r = f for a player; the analysis assumes generic parameters");
    }
    const bool a_wants_p = spec.wanted_alice == FeedbackAction::Positive;
    const bool b_wants_p = spec.wanted_bob == FeedbackAction::Positive;
    if (a_wants_p && b_wants_p) {
        bool alice_revenge = spec.params_alice.r > spec.params_alice.f;
        bool bob_revenge = spec.params_bob.r > spec.params_bob.f;
        if (alice_revenge != bob_revenge) {
            throw MixedRegimeError(
                "classify: players straddle the r-vs-f divide; no named class applies");
        }
        return alice_revenge ? GameClass::StagHunt : GameClass::StrictCooperation;
    }
    if (!a_wants_p && !b_wants_p) {
        return GameClass::PrisonersDilemma;
    }
    return GameClass::OneSidedDominance;
}

namespace detail {

inline Rational first_mover_payoff(const PayoffMatrix& m, Player first,
                                   FeedbackAction first_act, FeedbackAction second_act) {
    if (first == Player::Alice) {
        return m.at(first_act, second_act).first;
    }
    return m.at(second_act, first_act).second;
}

inline FeedbackAction best_response(const PayoffMatrix& m, Player second,
                                    FeedbackAction first_act) {
    Rational up, un;
    if (second == Player::Bob) {
        up = m.at(first_act, FeedbackAction::Positive).second;
        un = m.at(first_act, FeedbackAction::Negative).second;
    } else {
        up = m.at(FeedbackAction::Positive, first_act).first;
        un = m.at(FeedbackAction::Negative, first_act).first;
    }
    if (up == un) {
        throw TieError("sequential play: second mover is exactly indifferent");
    }
    return up > un ? FeedbackAction::Positive : FeedbackAction::Negative;
}

}  // namespace detail

// Subgame-perfect profile of the sequential game by backward induction.
// Returned pair is (alice action, bob action) regardless of mover order.
inline ActionProfile sequential_spe(const GameSpec& spec, Player first_mover) {
    PayoffMatrix m = build_matrix(spec);
    Player second = other_player(first_mover);

    FeedbackAction reply_p = detail::best_response(m, second, FeedbackAction::Positive);
    FeedbackAction reply_n = detail::best_response(m, second, FeedbackAction::Negative);

    Rational val_p = detail::first_mover_payoff(m, first_mover, FeedbackAction::Positive, reply_p);
    Rational val_n = detail::first_mover_payoff(m, first_mover, FeedbackAction::Negative, reply_n);
    if (val_p == val_n) {
        throw TieError("sequential play: first mover is exactly indifferent");
    }
    FeedbackAction first_act = val_p > val_n ? FeedbackAction::Positive : FeedbackAction::Negative;
    FeedbackAction second_act = first_act == FeedbackAction::Positive ? reply_p : reply_n;

    if (first_mover == Player::Alice) {
        return {first_act, second_act};
    }
    return {second_act, first_act};
}

struct ExtortionReport {
    bool extorted;
    FeedbackAction honest_action;  // what the first mover feels is deserved
    FeedbackAction spe_action;     // what sequential play drives them to
    Rational payoff_loss;          // honest-play payoff minus SPE payoff
};

// Extortion: sequential pressure flips a deserved negative into a positive.
// Honest play fixes the first mover at the wanted action with the second
// mover still best-responding.
inline ExtortionReport extortion_analysis(const GameSpec& spec, Player first_mover) {
    PayoffMatrix m = build_matrix(spec);
    Player second = other_player(first_mover);

    FeedbackAction wanted =
        first_mover == Player::Alice ? spec.wanted_alice : spec.wanted_bob;
    ActionProfile spe = sequential_spe(spec, first_mover);
    FeedbackAction spe_first = first_mover == Player::Alice ? spe.first : spe.second;

    FeedbackAction honest_reply = detail::best_response(m, second, wanted);
    Rational honest_value = detail::first_mover_payoff(m, first_mover, wanted, honest_reply);
    Rational spe_value = detail::first_mover_payoff(
        m, first_mover, spe_first,
        first_mover == Player::Alice ? spe.second : spe.first);

    ExtortionReport rep;
    rep.extorted = spe_first != wanted && wanted == FeedbackAction::Negative;
    rep.honest_action = wanted;
    rep.spe_action = spe_first;
    rep.payoff_loss = honest_value - spe_value;
    return rep;
}

}  // namespace repute::game
