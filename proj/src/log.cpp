#include "tacit/log.hpp"

#include <iostream>
#include <mutex>

namespace tacit {

namespace {
std::mutex sink_mutex;
WarningSink sink = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
}  // namespace

void set_warning_sink(WarningSink s) {
    std::lock_guard lock(sink_mutex);
    sink = std::move(s);
}

void warn(const std::string& message) {
    std::lock_guard lock(sink_mutex);
    if (sink) sink(message);
}

}  // namespace tacit
