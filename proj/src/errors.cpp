#include "strip/errors.hpp"

#include <charconv>
#include <iostream>
#include <mutex>
#include <utility>

namespace strip {
namespace {

std::mutex& handler_mutex()
{
    static std::mutex m;
    return m;
}

WarningHandler& handler_slot()
{
    static WarningHandler h = [](std::string_view msg) { std::clog << "warning: " << msg << '\n'; };
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler)
{
    std::lock_guard lock(handler_mutex());
    return std::exchange(handler_slot(), std::move(handler));
}

void warn(std::string_view message)
{
    std::lock_guard lock(handler_mutex());
    if (handler_slot()) handler_slot()(message);
}

std::string number_text(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace strip
