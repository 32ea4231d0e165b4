#ifndef TACIT_TYPES_HPP
#define TACIT_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tacit {

using NodeId = std::int32_t;
using CommunityId = std::int32_t;
using ClaimId = std::int32_t;
using UtteranceId = std::int32_t;
using TopicId = std::int32_t;
using TimeStep = std::int32_t;

inline constexpr UtteranceId kNoParent = -1;

/// Every recoverable failure in the library is reported with this type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tacit

#endif  // TACIT_TYPES_HPP
