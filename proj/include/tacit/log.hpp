#ifndef TACIT_LOG_HPP
#define TACIT_LOG_HPP

#include <functional>
#include <string>

namespace tacit {

/// Receives non-fatal diagnostics. Defaults to printing on stderr.
using WarningSink = std::function<void(const std::string&)>;

void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace tacit

#endif  // TACIT_LOG_HPP
