#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace spkl {

/// Which single-gender venue an author was labelled from (mother/father analog).
enum class Group { A, B };

/// Audience a comment was written for.
enum class Context { Single, Mixed };

inline constexpr std::array<Group, 2> kGroups{Group::A, Group::B};
inline constexpr std::array<Context, 2> kContexts{Context::Single, Context::Mixed};

inline std::string_view to_string(Group g) { return g == Group::A ? "A" : "B"; }
inline std::string_view to_string(Context c) { return c == Context::Single ? "single" : "mixed"; }

inline std::optional<Group> parse_group(std::string_view s) {
  if (s == "A") return Group::A;
  if (s == "B") return Group::B;
  return std::nullopt;
}

inline std::optional<Context> parse_context(std::string_view s) {
  if (s == "single") return Context::Single;
  if (s == "mixed") return Context::Mixed;
  return std::nullopt;
}

/// One of the four analysis groups: label x audience.
struct GroupKey {
  Group group;
  Context context;

  std::size_t index() const {
    return static_cast<std::size_t>(group) * 2 + static_cast<std::size_t>(context);
  }
  std::string name() const {
    return std::string(to_string(group)) + "/" + std::string(to_string(context));
  }
  friend bool operator==(const GroupKey&, const GroupKey&) = default;
};

inline constexpr std::array<GroupKey, 4> kGroupKeys{
    GroupKey{Group::A, Context::Single}, GroupKey{Group::A, Context::Mixed},
    GroupKey{Group::B, Context::Single}, GroupKey{Group::B, Context::Mixed}};

inline std::optional<GroupKey> parse_group_key(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto g = parse_group(s.substr(0, slash));
  auto c = parse_context(s.substr(slash + 1));
  if (!g || !c) return std::nullopt;
  return GroupKey{*g, *c};
}

}  // namespace spkl
