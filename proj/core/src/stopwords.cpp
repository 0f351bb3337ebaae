#include <cctype>
#include <string_view>

#include "binary_io.h"
#include "medsearch/text.h"

namespace medsearch {
namespace {

// Standard English inventory (the NLTK list).
constexpr std::string_view kEnglishStopwords = R"(# english stopwords
i
me
my
myself
we
our
ours
ourselves
you
you're
you've
you'll
you'd
your
yours
yourself
yourselves
he
him
his
himself
she
she's
her
hers
herself
it
it's
its
itself
they
them
their
theirs
themselves
what
which
who
whom
this
that
that'll
these
those
am
is
are
was
were
be
been
being
have
has
had
having
do
does
did
doing
a
an
the
and
but
if
or
because
as
until
while
of
at
by
for
with
about
against
between
into
through
during
before
after
above
below
to
from
up
down
in
out
on
off
over
under
again
further
then
once
here
there
when
where
why
how
all
any
both
each
few
more
most
other
some
such
no
nor
not
only
own
same
so
than
too
very
s
t
can
will
just
don
don't
should
should've
now
d
ll
m
o
re
ve
y
ain
aren
aren't
couldn
couldn't
didn
didn't
doesn
doesn't
hadn
hadn't
hasn
hasn't
haven
haven't
isn
isn't
ma
mightn
mightn't
mustn
mustn't
needn
needn't
shan
shan't
shouldn
shouldn't
wasn
wasn't
weren
weren't
won
won't
wouldn
wouldn't
)";

}  // namespace

StopwordList::StopwordList(std::unordered_set<std::string> words) {
  for (auto w : words) {
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    words_.insert(std::move(w));
  }
}

const StopwordList& StopwordList::english() {
  static const StopwordList list = parse(kEnglishStopwords);
  return list;
}

StopwordList StopwordList::parse(std::string_view text) {
  std::unordered_set<std::string> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    words.emplace(line);
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::load(const std::filesystem::path& path) { return parse(detail::read_file(path)); }

bool StopwordList::contains(std::string_view lowercase_word) const {
  return words_.find(std::string(lowercase_word)) != words_.end();
}

}  // namespace medsearch
