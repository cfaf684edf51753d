#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repute/game/game_model.hpp"

// Plaintext feedback escrow: hold whichever feedback arrives first until the
// counterparty submits, then release both in the same step. A half-submitted
// entry that passes its deadline expires and its feedback is discarded, never
// released; releasing a singleton would hand the counterparty exactly the
// sequential information the escrow exists to remove. Deadlines are an
// extension over the bare hold-until-both rule and default to "never".
// Time is logical and caller-supplied so tests are deterministic.
namespace repute::escrow {

using game::FeedbackAction;

using TransactionId = std::uint64_t;
using LogicalTime = std::uint64_t;

struct EscrowError : std::runtime_error {
    explicit EscrowError(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownTransaction : EscrowError {
    UnknownTransaction() : EscrowError("unknown transaction") {}
};
struct DuplicateSubmission : EscrowError {
    DuplicateSubmission() : EscrowError("party already submitted feedback") {}
};
struct ExpiredTransaction : EscrowError {
    ExpiredTransaction() : EscrowError("transaction past its feedback deadline") {}
};

enum class EscrowState { Open, OneSubmitted, Released, Expired };

inline std::string escrow_state_name(EscrowState s) {
    switch (s) {
        case EscrowState::Open: return "open";
        case EscrowState::OneSubmitted: return "one-submitted";
        case EscrowState::Released: return "released";
        case EscrowState::Expired: return "expired";
    }
    return "?";
}

// what the store is willing to say about an entry before release
struct EntryInfo {
    TransactionId txn = 0;
    std::string buyer;
    std::string seller;
    EscrowState state = EscrowState::Open;
    LogicalTime opened_at = 0;
    std::optional<LogicalTime> deadline;
};

// append-only mutation record; a store replayed from its events reaches the
// identical state
struct EscrowEvent {
    enum class Kind { Open, Submit, Expire } kind;
    TransactionId txn = 0;
    std::string buyer;   // Open
    std::string seller;  // Open
    std::optional<LogicalTime> deadline;
    std::string party;   // Submit
    FeedbackAction action = FeedbackAction::Positive;
    LogicalTime at = 0;
};

class EscrowStore {
public:
    TransactionId open_transaction(const std::string& buyer, const std::string& seller,
                                   std::optional<LogicalTime> deadline = std::nullopt,
                                   LogicalTime now = 0) {
        if (buyer == seller) {
            throw EscrowError("open_transaction: parties must be distinct");
        }
        EscrowEntry e;
        e.txn = next_id_++;
        e.buyer = buyer;
        e.seller = seller;
        e.opened_at = now;
        e.deadline = deadline;
        entries_[e.txn] = e;
        events_.push_back({EscrowEvent::Kind::Open, e.txn, buyer, seller, deadline, "",
                           FeedbackAction::Positive, now});
        return e.txn;
    }

    EscrowState submit_feedback(TransactionId txn, const std::string& party,
                                FeedbackAction action, LogicalTime now = 0) {
        EscrowEntry& e = entry_mut(txn);
        if (e.state == EscrowState::Expired) {
            throw ExpiredTransaction();
        }
        if (e.state == EscrowState::Released) {
            throw DuplicateSubmission();
        }
        if (past_deadline(e, now)) {
            expire(txn, now);
            throw ExpiredTransaction();
        }
        std::optional<FeedbackAction>* slot = nullptr;
        if (party == e.buyer) {
            slot = &e.buyer_feedback;
        } else if (party == e.seller) {
            slot = &e.seller_feedback;
        } else {
            throw EscrowError("submit_feedback: party not in transaction");
        }
        if (slot->has_value()) {
            throw DuplicateSubmission();
        }
        *slot = action;
        e.state = (e.buyer_feedback && e.seller_feedback) ? EscrowState::Released
                                                          : EscrowState::OneSubmitted;
        events_.push_back(
            {EscrowEvent::Kind::Submit, txn, "", "", std::nullopt, party, action, now});
        return e.state;
    }

    // both feedbacks as (buyer, seller), visible only once released
    std::optional<std::pair<FeedbackAction, FeedbackAction>> query_released(
        TransactionId txn) const {
        const EscrowEntry& e = entry(txn);
        if (e.state != EscrowState::Released) {
            return std::nullopt;
        }
        return std::make_pair(*e.buyer_feedback, *e.seller_feedback);
    }

    EscrowState state(TransactionId txn) const { return entry(txn).state; }

    EntryInfo info(TransactionId txn) const {
        const EscrowEntry& e = entry(txn);
        return {e.txn, e.buyer, e.seller, e.state, e.opened_at, e.deadline};
    }

    bool expire(TransactionId txn, LogicalTime now) {
        EscrowEntry& e = entry_mut(txn);
        if (e.state == EscrowState::Released || e.state == EscrowState::Expired) {
            return false;
        }
        if (!past_deadline(e, now)) {
            return false;
        }
        // the singleton feedback is discarded with the entry
        e.buyer_feedback.reset();
        e.seller_feedback.reset();
        e.state = EscrowState::Expired;
        events_.push_back({EscrowEvent::Kind::Expire, txn, "", "", std::nullopt, "",
                           FeedbackAction::Positive, now});
        return true;
    }

    std::size_t expire_due(LogicalTime now) {
        std::size_t count = 0;
        for (auto& [id, e] : entries_) {
            (void)e;
            if (expire(id, now)) {
                ++count;
            }
        }
        return count;
    }

    std::size_t size() const { return entries_.size(); }

    const std::vector<EscrowEvent>& events() const { return events_; }

    static EscrowStore replay(const std::vector<EscrowEvent>& events) {
        EscrowStore s;
        for (const EscrowEvent& ev : events) {
            switch (ev.kind) {
                case EscrowEvent::Kind::Open:
                    s.open_transaction(ev.buyer, ev.seller, ev.deadline, ev.at);
                    break;
                case EscrowEvent::Kind::Submit:
                    s.submit_feedback(ev.txn, ev.party, ev.action, ev.at);
                    break;
                case EscrowEvent::Kind::Expire: {
                    EscrowEntry& e = s.entry_mut(ev.txn);
                    e.buyer_feedback.reset();
                    e.seller_feedback.reset();
                    e.state = EscrowState::Expired;
                    s.events_.push_back(ev);
                    break;
                }
            }
        }
        return s;
    }

private:
    struct EscrowEntry {
        TransactionId txn = 0;
        std::string buyer;
        std::string seller;
        std::optional<FeedbackAction> buyer_feedback;
        std::optional<FeedbackAction> seller_feedback;
        EscrowState state = EscrowState::Open;
        LogicalTime opened_at = 0;
        std::optional<LogicalTime> deadline;
    };

    const EscrowEntry& entry(TransactionId txn) const {
        auto it = entries_.find(txn);
        if (it == entries_.end()) {
            throw UnknownTransaction();
        }
        return it->second;
    }

    EscrowEntry& entry_mut(TransactionId txn) {
        auto it = entries_.find(txn);
        if (it == entries_.end()) {
            throw UnknownTransaction();
        }
        return it->second;
    }

    static bool past_deadline(const EscrowEntry& e, LogicalTime now) {
        return e.deadline.has_value() && now > *e.deadline;
    }

    TransactionId next_id_ = 1;
    std::map<TransactionId, EscrowEntry> entries_;
    std::vector<EscrowEvent> events_;
};

}  // namespace repute::escrow
