//! Word lists for the two registers. Nouns carry a semantic class; verbs
//! carry the frames they occur in and the classes those frames select.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Noun {
    pub lemma: &'static str,
    /// Empty for mass nouns.
    pub plural: &'static str,
    pub class: &'static str,
}

const fn n(lemma: &'static str, plural: &'static str, class: &'static str) -> Noun {
    Noun { lemma, plural, class }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// V NP
    Obj(&'static [&'static str]),
    /// V P NP
    Pp(&'static str, &'static [&'static str]),
    /// V NP P NP
    ObjPp(&'static [&'static str], &'static str, &'static [&'static str]),
    /// V PRT NP
    Prt(&'static str, &'static [&'static str]),
    /// V NP NP
    Dat(&'static [&'static str], &'static [&'static str]),
    /// V (ADV)
    Intrans(&'static [&'static str]),
    /// V to VP
    ToInf,
    /// V that S
    That,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verb {
    pub lemma: &'static str,
    pub vbz: &'static str,
    pub vbd: &'static str,
    pub vbg: &'static str,
    /// Subject classes; pronouns are always allowed.
    pub subj: &'static [&'static str],
    pub frames: &'static [Frame],
}

const fn v(
    lemma: &'static str,
    vbz: &'static str,
    vbd: &'static str,
    vbg: &'static str,
    subj: &'static [&'static str],
    frames: &'static [Frame],
) -> Verb {
    Verb { lemma, vbz, vbd, vbg, subj, frames }
}

use Frame::*;

const ANIM: &[&str] = &["person", "animal"];
const PERSON: &[&str] = &["person"];

pub const CONV_NOUNS: &[Noun] = &[
    n("ball", "balls", "toy"),
    n("cookie", "cookies", "food"),
    n("dog", "dogs", "animal"),
    n("book", "books", "book"),
    n("baby", "babies", "person"),
    n("chair", "chairs", "furniture"),
    n("shoe", "shoes", "clothes"),
    n("milk", "", "drink"),
    n("block", "blocks", "toy"),
    n("apple", "apples", "food"),
    n("cat", "cats", "animal"),
    n("bed", "beds", "furniture"),
    n("hat", "hats", "clothes"),
    n("juice", "", "drink"),
    n("boy", "boys", "person"),
    n("truck", "trucks", "toy"),
    n("banana", "bananas", "food"),
    n("duck", "ducks", "animal"),
    n("table", "tables", "furniture"),
    n("sock", "socks", "clothes"),
    n("girl", "girls", "person"),
    n("doll", "dolls", "toy"),
    n("cracker", "crackers", "food"),
    n("bunny", "bunnies", "animal"),
    n("story", "stories", "book"),
    n("couch", "couches", "furniture"),
    n("coat", "coats", "clothes"),
    n("water", "", "drink"),
    n("train", "trains", "toy"),
    n("cheese", "cheeses", "food"),
    n("kitty", "kitties", "animal"),
    n("stool", "stools", "furniture"),
    n("hand", "hands", "body"),
    n("puzzle", "puzzles", "toy"),
    n("sandwich", "sandwiches", "food"),
    n("horse", "horses", "animal"),
    n("box", "boxes", "container"),
    n("face", "faces", "body"),
    n("car", "cars", "toy"),
    n("grape", "grapes", "food"),
    n("cow", "cows", "animal"),
    n("bath", "baths", "place"),
    n("diaper", "diapers", "clothes"),
    n("picture", "pictures", "book"),
    n("spoon", "spoons", "utensil"),
    n("cup", "cups", "container"),
    n("kitchen", "kitchens", "place"),
    n("nose", "noses", "body"),
    n("tower", "towers", "construction"),
    n("song", "songs", "song"),
    n("bowl", "bowls", "container"),
    n("park", "parks", "place"),
    n("foot", "feet", "body"),
    n("house", "houses", "construction"),
    n("lady", "ladies", "person"),
    n("bird", "birds", "animal"),
    n("bear", "bears", "toy"),
    n("pasta", "", "food"),
    n("bottle", "bottles", "container"),
    n("room", "rooms", "place"),
    n("man", "men", "person"),
    n("tooth", "teeth", "body"),
    n("rhyme", "rhymes", "song"),
    n("pig", "pigs", "animal"),
    n("pillow", "pillows", "furniture"),
    n("shirt", "shirts", "clothes"),
    n("egg", "eggs", "food"),
    n("fork", "forks", "utensil"),
    n("bucket", "buckets", "container"),
    n("garden", "gardens", "place"),
];

pub const CONV_VERBS: &[Verb] = &[
    v("want", "wants", "wanted", "wanting", ANIM, &[Obj(&["food", "drink", "toy"]), ToInf]),
    v("eat", "eats", "ate", "eating", ANIM, &[Obj(&["food"]), Intrans(&["now", "too"])]),
    v("put", "puts", "put", "putting", PERSON, &[ObjPp(&["toy", "clothes", "food"], "on", &["furniture"]), ObjPp(&["toy", "food", "utensil"], "in", &["container"])]),
    v("go", "goes", "went", "going", ANIM, &[Pp("to", &["place"]), Intrans(&["outside", "home"])]),
    v("look", "looks", "looked", "looking", ANIM, &[Pp("at", &["book", "animal", "toy"])]),
    v("read", "reads", "read", "reading", PERSON, &[Obj(&["book"]), Dat(&["person"], &["book"])]),
    v("drink", "drinks", "drank", "drinking", ANIM, &[Obj(&["drink"])]),
    v("sit", "sits", "sat", "sitting", ANIM, &[Pp("on", &["furniture"]), Intrans(&["down", "here", "there"])]),
    v("throw", "throws", "threw", "throwing", PERSON, &[Obj(&["toy"]), Prt("away", &["food", "toy"])]),
    v("like", "likes", "liked", "liking", ANIM, &[Obj(&["food", "drink", "animal", "song"])]),
    v("give", "gives", "gave", "giving", PERSON, &[Dat(&["person", "animal"], &["food", "toy", "drink"]), ObjPp(&["food", "toy"], "to", &["person", "animal"])]),
    v("play", "plays", "played", "playing", ANIM, &[Pp("with", &["toy"]), Intrans(&["outside", "now"])]),
    v("wear", "wears", "wore", "wearing", PERSON, &[Obj(&["clothes"])]),
    v("pick", "picks", "picked", "picking", PERSON, &[Prt("up", &["toy", "clothes", "utensil"])]),
    v("build", "builds", "built", "building", PERSON, &[Obj(&["construction"])]),
    v("sing", "sings", "sang", "singing", ANIM, &[Obj(&["song"]), Intrans(&["again", "now"])]),
    v("wash", "washes", "washed", "washing", PERSON, &[Obj(&["body", "utensil"])]),
    v("feed", "feeds", "fed", "feeding", PERSON, &[Obj(&["animal", "person"]), Dat(&["animal", "person"], &["food"])]),
    v("hold", "holds", "held", "holding", ANIM, &[Obj(&["toy", "animal", "utensil", "container"])]),
    v("sleep", "sleeps", "slept", "sleeping", ANIM, &[Pp("in", &["furniture"]), Intrans(&["now", "tonight"])]),
    v("find", "finds", "found", "finding", ANIM, &[Obj(&["toy", "clothes", "utensil"])]),
    v("drop", "drops", "dropped", "dropping", ANIM, &[Obj(&["utensil", "food", "container"])]),
    v("think", "thinks", "thought", "thinking", PERSON, &[That]),
    v("climb", "climbs", "climbed", "climbing", ANIM, &[Pp("on", &["furniture"]), Prt("up", &["furniture"])]),
    v("pet", "pets", "petted", "petting", PERSON, &[Obj(&["animal"])]),
    v("cook", "cooks", "cooked", "cooking", PERSON, &[Obj(&["food"])]),
    v("try", "tries", "tried", "trying", ANIM, &[ToInf, Obj(&["food"])]),
    v("open", "opens", "opened", "opening", PERSON, &[Obj(&["container", "book"])]),
    v("need", "needs", "needed", "needing", ANIM, &[Obj(&["utensil", "clothes", "drink"]), ToInf]),
    v("kiss", "kisses", "kissed", "kissing", ANIM, &[Obj(&["person", "animal", "body"])]),
    v("see", "sees", "saw", "seeing", ANIM, &[Obj(&["animal", "person", "book"])]),
    v("fill", "fills", "filled", "filling", PERSON, &[Obj(&["container"]), Prt("up", &["container"])]),
    v("know", "knows", "knew", "knowing", PERSON, &[That]),
    v("hug", "hugs", "hugged", "hugging", ANIM, &[Obj(&["person", "animal", "toy"])]),
    v("live", "lives", "lived", "living", ANIM, &[Pp("in", &["construction", "place"])]),
    v("stir", "stirs", "stirred", "stirring", PERSON, &[Obj(&["food", "drink"])]),
    v("ride", "rides", "rode", "riding", PERSON, &[Obj(&["toy", "animal"]), Pp("in", &["toy"])]),
    v("bring", "brings", "brought", "bringing", PERSON, &[Dat(&["person"], &["food", "toy", "book"]), Obj(&["toy", "book", "container"])]),
    v("brush", "brushes", "brushed", "brushing", PERSON, &[Obj(&["body", "animal"])]),
    v("chase", "chases", "chased", "chasing", ANIM, &[Obj(&["animal", "toy"])]),
    v("fix", "fixes", "fixed", "fixing", PERSON, &[Obj(&["toy", "construction"])]),
    v("say", "says", "said", "saying", PERSON, &[That]),
];

pub const CONV_PROPN: &[&str] = &["Mommy", "Daddy", "Grandma", "Max", "Lily"];
pub const CONV_ADJ: &[&str] = &["big", "little", "red", "nice", "yummy", "blue", "new", "dirty", "soft", "funny", "hot", "wet"];
pub const CONV_ADV: &[&str] = &["now", "again", "today", "too", "later", "please", "first"];
pub const CONV_INTJ: &[&str] = &["oh", "okay", "look", "hey", "yeah", "well"];
pub const CONV_VOC: &[&str] = &["honey", "sweetie", "buddy"];
pub const CONV_PLACE_PP: &[(&str, &[&str])] = &[("in", &["place"]), ("with", &["person"]), ("on", &["furniture"])];

const AGENT: &[&str] = &["person", "group"];
const SCHOLAR: &[&str] = &["person"];

pub const WRIT_NOUNS: &[Noun] = &[
    n("government", "governments", "group"),
    n("report", "reports", "document"),
    n("city", "cities", "place"),
    n("author", "authors", "person"),
    n("policy", "policies", "plan"),
    n("river", "rivers", "geo"),
    n("church", "churches", "construction"),
    n("committee", "committees", "group"),
    n("novel", "novels", "document"),
    n("war", "wars", "event"),
    n("species", "species", "organism"),
    n("painter", "painters", "person"),
    n("region", "regions", "place"),
    n("plan", "plans", "plan"),
    n("council", "councils", "group"),
    n("study", "studies", "document"),
    n("bridge", "bridges", "construction"),
    n("waiter", "waiters", "person"),
    n("mountain", "mountains", "geo"),
    n("method", "methods", "idea"),
    n("army", "armies", "group"),
    n("election", "elections", "event"),
    n("museum", "museums", "construction"),
    n("plant", "plants", "organism"),
    n("village", "villages", "place"),
    n("theory", "theories", "idea"),
    n("minister", "ministers", "person"),
    n("article", "articles", "document"),
    n("law", "laws", "plan"),
    n("company", "companies", "group"),
    n("castle", "castles", "construction"),
    n("battle", "battles", "event"),
    n("island", "islands", "geo"),
    n("doctor", "doctors", "person"),
    n("model", "models", "idea"),
    n("insect", "insects", "organism"),
    n("district", "districts", "place"),
    n("letter", "letters", "document"),
    n("festival", "festivals", "event"),
    n("university", "universities", "group"),
    n("tower", "towers", "construction"),
    n("student", "students", "person"),
    n("budget", "budgets", "plan"),
    n("lake", "lakes", "geo"),
    n("fish", "fishes", "organism"),
    n("argument", "arguments", "idea"),
    n("province", "provinces", "place"),
    n("treaty", "treaties", "plan"),
    n("conference", "conferences", "event"),
    n("house", "houses", "construction"),
    n("book", "books", "document"),
    n("teacher", "teachers", "person"),
    n("party", "parties", "group"),
    n("coast", "coasts", "geo"),
    n("award", "awards", "prize"),
    n("prize", "prizes", "prize"),
    n("medal", "medals", "prize"),
    n("data", "", "evidence"),
    n("evidence", "", "evidence"),
    n("record", "records", "evidence"),
    n("man", "men", "person"),
    n("bird", "birds", "organism"),
    n("market", "markets", "place"),
    n("temple", "temples", "construction"),
    n("crisis", "crises", "event"),
    n("scholar", "scholars", "person"),
];

pub const WRIT_VERBS: &[Verb] = &[
    v("publish", "publishes", "published", "publishing", AGENT, &[Obj(&["document"])]),
    v("build", "builds", "built", "building", AGENT, &[Obj(&["construction"])]),
    v("lead", "leads", "led", "leading", AGENT, &[Obj(&["group"]), Pp("to", &["event"])]),
    v("approve", "approves", "approved", "approving", AGENT, &[Obj(&["plan"])]),
    v("visit", "visits", "visited", "visiting", SCHOLAR, &[Obj(&["place", "construction"])]),
    v("describe", "describes", "described", "describing", SCHOLAR, &[Obj(&["organism", "idea", "event"])]),
    v("live", "lives", "lived", "living", ANIM_W, &[Pp("in", &["place"]), Pp("near", &["geo"])]),
    v("win", "wins", "won", "winning", AGENT, &[Obj(&["prize", "event"])]),
    v("argue", "argues", "argued", "arguing", SCHOLAR, &[That, Pp("for", &["plan", "idea"])]),
    v("cross", "crosses", "crossed", "crossing", AGENT, &[Obj(&["geo"])]),
    v("write", "writes", "wrote", "writing", SCHOLAR, &[Obj(&["document"]), Pp("about", &["event", "place", "organism"])]),
    v("reject", "rejects", "rejected", "rejecting", AGENT, &[Obj(&["plan", "idea"])]),
    v("destroy", "destroys", "destroyed", "destroying", AGENT_EVENT, &[Obj(&["construction", "place"])]),
    v("study", "studies", "studied", "studying", SCHOLAR, &[Obj(&["organism", "evidence", "idea"])]),
    v("elect", "elects", "elected", "electing", AGENT, &[Obj(&["person"])]),
    v("attend", "attends", "attended", "attending", SCHOLAR, &[Obj(&["event"])]),
    v("develop", "develops", "developed", "developing", AGENT, &[Obj(&["idea", "plan"])]),
    v("suggest", "suggests", "suggested", "suggesting", DOC_AGENT, &[That]),
    v("receive", "receives", "received", "receiving", AGENT, &[Obj(&["prize", "document"])]),
    v("examine", "examines", "examined", "examining", SCHOLAR, &[Obj(&["evidence", "document", "organism"])]),
    v("join", "joins", "joined", "joining", SCHOLAR, &[Obj(&["group"])]),
    v("flow", "flows", "flowed", "flowing", GEO, &[Pp("into", &["geo"]), Pp("through", &["place"])]),
    v("decide", "decides", "decided", "deciding", AGENT, &[ToInf]),
    v("announce", "announces", "announced", "announcing", AGENT, &[Obj(&["plan", "event", "prize"])]),
    v("support", "supports", "supported", "supporting", AGENT_DOC, &[Obj(&["plan", "idea", "person"])]),
    v("govern", "governs", "governed", "governing", AGENT, &[Obj(&["place"])]),
    v("collect", "collects", "collected", "collecting", SCHOLAR, &[Obj(&["evidence", "organism"])]),
    v("claim", "claims", "claimed", "claiming", DOC_AGENT, &[That]),
    v("defeat", "defeats", "defeated", "defeating", AGENT, &[Obj(&["group"])]),
    v("restore", "restores", "restored", "restoring", AGENT, &[Obj(&["construction"])]),
    v("establish", "establishes", "established", "establishing", SCHOLAR, &[Obj(&["group"])]),
    v("organize", "organizes", "organized", "organizing", AGENT, &[Obj(&["event"])]),
    v("inhabit", "inhabits", "inhabited", "inhabiting", ORG, &[Obj(&["geo", "place"])]),
    v("fund", "funds", "funded", "funding", AGENT, &[Obj(&["construction", "event", "document"])]),
    v("attempt", "attempts", "attempted", "attempting", AGENT, &[ToInf]),
    v("review", "reviews", "reviewed", "reviewing", AGENT, &[Obj(&["document", "plan"])]),
    v("show", "shows", "showed", "showing", DOC_AGENT, &[That, Obj(&["evidence"])]),
    v("sign", "signs", "signed", "signing", AGENT, &[Obj(&["plan", "document"])]),
    v("find", "finds", "found", "finding", SCHOLAR, &[Obj(&["evidence", "organism"]), That]),
    v("feed", "feeds", "fed", "feeding", ORG, &[Pp("on", &["organism"])]),
    v("know", "knows", "knew", "knowing", SCHOLAR, &[That]),
    v("enjoy", "enjoys", "enjoyed", "enjoying", SCHOLAR, &[Obj(&["event", "document"])]),
];

const ANIM_W: &[&str] = &["person", "organism"];
const AGENT_EVENT: &[&str] = &["group", "event"];
const DOC_AGENT: &[&str] = &["person", "document"];
const AGENT_DOC: &[&str] = &["group", "document", "person"];
const GEO: &[&str] = &["geo"];
const ORG: &[&str] = &["organism"];

pub const WRIT_PROPN: &[&str] = &["London", "Paris", "Smith", "Johnson", "Europe", "France"];
pub const WRIT_ADJ: &[&str] = &[
    "new", "large", "major", "local", "national", "early", "small", "ancient", "important", "political", "public", "modern", "northern", "final", "significant", "historical",
];
pub const WRIT_ADV: &[&str] = &["also", "later", "eventually", "largely", "finally", "successfully", "formally", "initially", "widely"];
pub const WRIT_PLACE_PP: &[(&str, &[&str])] = &[
    ("in", &["place"]),
    ("during", &["event"]),
    ("after", &["event"]),
    ("near", &["geo"]),
    ("with", &["group"]),
];
pub const WRIT_NOUN_PP: &[&str] = &["of", "from", "in"];
