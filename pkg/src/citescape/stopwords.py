"""Bundled English stopword list used by term extraction."""

STOPWORDS = frozenset("""
a about above after again against all almost along already also although always
am among an and another any are around as at back based be became because
become becomes been before being below between beyond both but by came can
cannot could did do does doing done down due during each either else enough
etc even ever every few first for found from further gave get gets give given
gives had has have having he hence her here hers herself him himself his how
however i if in indeed instead into is it its itself just later least less let
like made make makes many may me might more moreover most much must my myself
near neither never nevertheless new next no nor not nothing now of off often
on once one only onto or other others otherwise our ours ourselves out over
own per perhaps possible present previous previously quite rather really
regarding respectively same second several shall she should show showed shown
shows since so some something somewhat still such than that the their theirs
them themselves then there therefore these they third this those though three
through throughout thus to together too toward towards two under undergoing
until up upon us use used using various very via was we well were what when
where whereas wherein whether which while who whom whose why will with within
without would yet you your yours yourself yourselves
""".split())
