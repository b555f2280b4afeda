#include "cpi/graphical/harris.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpi/random.hpp"

namespace cpi {

Window Window::make(Site x_min, Site x_max, Time t_max) {
  if (x_min > x_max) throw InvalidArgument("window: empty spatial extent");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("window: t_max must be positive");
  return Window{x_min, x_max, t_max};
}

Site default_guard(const Kernel& kernel, Time t_max) {
  const double m = kernel.range();
  return static_cast<Site>(std::ceil(kernel.lambda() * m * t_max) + 4.0 * m);
}

bool event_before(const Event& a, const Event& b) {
  if (a.time != b.time) return a.time < b.time;
  const bool da = a.is_death();
  const bool db = b.is_death();
  if (da != db) return da;
  if (a.from != b.from) return a.from < b.from;
  return (a.to - a.from) < (b.to - b.from);
}

HarrisEvents::HarrisEvents(std::shared_ptr<const detail::EventStore> store, Origin origin)
    : store_(std::move(store)), origin_(origin) {
  const Window& raw = store_->window;
  window_ = Window{raw.x_min - origin_.site, raw.x_max - origin_.site, raw.t_max - origin_.time};
  const auto& ev = store_->events;
  first_visible_ = static_cast<std::size_t>(
      std::lower_bound(ev.begin(), ev.end(), origin_.time,
                       [](const Event& e, Time t) { return e.time < t; }) -
      ev.begin());
}

HarrisEvents HarrisEvents::from_events(Kernel kernel, Window window, std::vector<Event> events,
                                       std::uint64_t seed) {
  window = Window::make(window.x_min, window.x_max, window.t_max);
  for (const Event& e : events) {
    if (!(e.time >= 0.0) || e.time > window.t_max) {
      throw WindowError("harris: event time outside [0, t_max]");
    }
    if (!window.contains_site(e.from) || !window.contains_site(e.to)) {
      throw WindowError("harris: event site outside window");
    }
    if (e.is_arrow() && kernel.weight(e.to - e.from) <= 0.0) {
      throw InvalidArgument("harris: arrow displacement has zero kernel weight");
    }
  }
  std::sort(events.begin(), events.end(), event_before);
  for (std::size_t i = 1; i < events.size(); ++i) {
    const Event& a = events[i - 1];
    const Event& b = events[i];
    if (a.from == b.from && a.to == b.to && a.time == b.time) {
      throw InvalidArgument("harris: repeated event in one stream");
    }
  }
  auto store = std::make_shared<detail::EventStore>(
      detail::EventStore{std::move(kernel), window, seed, std::move(events)});
  return HarrisEvents(std::move(store), Origin{});
}

std::span<const Event> HarrisEvents::raw_events() const {
  const auto& ev = store_->events;
  return std::span<const Event>(ev).subspan(first_visible_);
}

std::vector<Event> HarrisEvents::events() const {
  std::vector<Event> out;
  out.reserve(size());
  for (const Event& e : raw_events()) {
    out.push_back(Event{e.time - origin_.time, e.from - origin_.site, e.to - origin_.site});
  }
  return out;
}

std::vector<Time> HarrisEvents::deaths_at(Site x) const {
  const Site raw = to_raw_site(x);
  std::vector<Time> out;
  for (const Event& e : raw_events()) {
    if (e.is_death() && e.from == raw) out.push_back(e.time - origin_.time);
  }
  return out;
}

std::vector<Time> HarrisEvents::arrows_between(Site x, Site y) const {
  const Site rx = to_raw_site(x);
  const Site ry = to_raw_site(y);
  std::vector<Time> out;
  for (const Event& e : raw_events()) {
    if (e.is_arrow() && e.from == rx && e.to == ry) out.push_back(e.time - origin_.time);
  }
  return out;
}

HarrisEvents HarrisEvents::shifted(Site x, Time t) const {
  return HarrisEvents(store_, Origin{origin_.site + x, origin_.time + t});
}

HarrisEvents sample_harris(const Kernel& kernel, const Window& window, std::uint64_t seed) {
  const Window w = Window::make(window.x_min, window.x_max, window.t_max);
  const std::vector<int> support = kernel.support();

  std::vector<Event> events;
  const double expected =
      static_cast<double>(w.width()) * w.t_max * (1.0 + kernel.lambda());
  events.reserve(static_cast<std::size_t>(expected * 1.05 + 64));

  auto fill_stream = [&](std::uint64_t key, double rate, Site from, Site to) {
    if (rate <= 0.0) return;
    CounterStream stream(key);
    Time t = stream.next_exponential(rate);
    while (t <= w.t_max) {
      events.push_back(Event{t, from, to});
      t += stream.next_exponential(rate);
    }
  };

  for (Site x = w.x_min; x <= w.x_max; ++x) {
    fill_stream(stream_key(seed, StreamKind::kDeath, x), 1.0, x, x);
    for (int d : support) {
      const Site y = x + d;
      if (!w.contains_site(y)) continue;
      fill_stream(stream_key(seed, StreamKind::kArrow, x, d), kernel.rate(d), x, y);
    }
  }
  std::sort(events.begin(), events.end(), event_before);
  auto store =
      std::make_shared<detail::EventStore>(detail::EventStore{kernel, w, seed, std::move(events)});
  return HarrisEvents(std::move(store), Origin{});
}

std::vector<Time> sample_stream(const Kernel& kernel, std::uint64_t seed, Site x, int d, Time t_max) {
  const double rate = d == 0 ? 1.0 : kernel.rate(d);
  std::vector<Time> out;
  if (rate <= 0.0) return out;
  CounterStream stream(d == 0 ? stream_key(seed, StreamKind::kDeath, x) : stream_key(seed, StreamKind::kArrow, x, d));
  for (Time t = stream.next_exponential(rate); t <= t_max; t += stream.next_exponential(rate)) out.push_back(t);
  return out;
}

HarrisEvents shift_events(const HarrisEvents& h, Site x, Time t) {
  if (!(t >= 0.0) || !(t < h.window().t_max)) {
    std::ostringstream os;
    os << "shift_events: time shift " << t << " leaves no time in the window [0, "
       << h.window().t_max << "]";
    throw WindowError(os.str());
  }
  return h.shifted(x, t);
}

HarrisEvents restrict_events(const HarrisEvents& h, const Window& sub) {
  const Window& w = h.window();
  if (sub.x_min < w.x_min || sub.x_max > w.x_max || sub.t_max > w.t_max) {
    throw WindowError("restrict_events: sub-window not inside the window");
  }
  std::vector<Event> kept;
  for (const Event& e : h.events()) {
    if (e.time <= sub.t_max && sub.contains_site(e.from) && sub.contains_site(e.to)) {
      kept.push_back(e);
    }
  }
  return HarrisEvents::from_events(h.kernel(), sub, std::move(kept), h.seed());
}

}  // namespace cpi
