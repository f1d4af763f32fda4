#pragma once

// Default word lists backing the fixed-size feature groups. The same lists
// are shipped as editable files under data/; these are the built-in copies
// so the library works without external paths. Counts are load-time
// invariants: 337 function words, 248 misspellings.

namespace dehealth::lexicons {

inline constexpr const char* kFunctionWords[] = {
    "a", "about", "above", "across", "after", "afterwards", "again",
    "against", "all", "almost", "alone", "along", "already", "also",
    "although", "always", "am", "among", "amongst", "an", "and", "another",
    "any", "anybody", "anyhow", "anyone", "anything", "anyway", "anywhere",
    "are", "around", "as", "at", "back", "be", "became", "because", "become",
    "becomes", "becoming", "been", "before", "beforehand", "behind", "being",
    "below", "beside", "besides", "between", "beyond", "both", "but", "by",
    "can", "cannot", "could", "dare", "despite", "did", "do", "does",
    "doing", "done", "down", "during", "each", "either", "else", "elsewhere",
    "enough", "even", "ever", "every", "everybody", "everyone", "everything",
    "everywhere", "except", "few", "fewer", "for", "former", "formerly",
    "from", "further", "furthermore", "had", "has", "have", "having", "he",
    "hence", "her", "here", "hereafter", "hereby", "herein", "hereupon",
    "hers", "herself", "him", "himself", "his", "how", "however", "i", "if",
    "in", "indeed", "inside", "instead", "into", "is", "it", "its", "itself",
    "last", "latter", "latterly", "least", "less", "lest", "like",
    "likewise", "little", "many", "may", "me", "meanwhile", "might", "mine",
    "more", "moreover", "most", "mostly", "much", "must", "my", "myself",
    "namely", "near", "need", "neither", "never", "nevertheless", "next",
    "no", "nobody", "none", "nonetheless", "nor", "not", "nothing", "now",
    "nowhere", "of", "off", "often", "on", "once", "one", "only", "onto",
    "or", "other", "others", "otherwise", "our", "ours", "ourselves", "out",
    "outside", "over", "own", "per", "perhaps", "please", "provided",
    "quite", "rather", "really", "round", "same", "say", "second", "seem",
    "seemed", "seeming", "seems", "several", "shall", "she", "should",
    "since", "so", "some", "somebody", "somehow", "someone", "something",
    "sometime", "sometimes", "somewhat", "somewhere", "still", "such",
    "than", "that", "the", "their", "theirs", "them", "themselves", "then",
    "thence", "there", "thereafter", "thereby", "therefore", "therein",
    "thereupon", "these", "they", "third", "this", "those", "though",
    "through", "throughout", "thru", "thus", "till", "to", "together", "too",
    "toward", "towards", "under", "underneath", "unless", "until", "unto",
    "up", "upon", "us", "used", "via", "very", "was", "we", "well", "were",
    "what", "whatever", "when", "whence", "whenever", "where", "whereafter",
    "whereas", "whereby", "wherein", "whereupon", "wherever", "whether",
    "which", "whichever", "while", "whither", "who", "whoever", "whole",
    "whom", "whose", "why", "will", "with", "within", "without", "would",
    "yet", "you", "your", "yours", "yourself", "yourselves",
    "above-mentioned", "aboard", "concerning", "regarding", "amid", "amidst",
    "atop", "beneath", "betwixt", "circa", "midst", "notwithstanding",
    "opposite", "outwith", "pending", "plus", "minus", "save", "sans",
    "versus", "vis-a-vis", "worth", "ought", "shan't", "won't", "can't",
    "don't", "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't",
    "hasn't", "haven't", "hadn't", "couldn't", "shouldn't", "wouldn't",
    "mustn't", "needn't", "daren't", "it's", "that's", "there's", "here's",
    "what's", "who's", "let's", "i'm", "i've"
};

inline constexpr const char* kMisspellings[] = {
    "abandonned", "aberation", "abilty", "abortificant", "abreviate",
    "absense", "absolutly", "abundacies", "academicly", "accademic",
    "accension", "acceptible", "accesible", "accidant", "accidentaly",
    "accomodate", "accomodation", "accordeon", "accross", "acheive",
    "acheived", "acheivement", "achievment", "acknowledgement", "acommodate",
    "acording", "acquaintence", "acquiantance", "actualy", "adavanced",
    "addionally", "additinally", "addmission", "adequit", "adhearing",
    "adherance", "admendment", "admininistrative", "adminstration",
    "admissability", "adolecent", "advantagous", "adventrous", "adverst",
    "advertisment", "adviseable", "aeriel", "affilate", "affilliate",
    "agains", "aggresive", "agravate", "agreeement", "agression",
    "airbourne", "alchohol", "alcohal", "aledge", "aleged", "algorythm",
    "allegedy", "allegience", "alledge", "allmost", "allot", "allready",
    "allthough", "alltime", "alochol", "alot", "alotted", "alowed",
    "alreading", "alse", "altho", "althought", "alwasy", "alwys",
    "amendmant", "ammend", "ammount", "amoung", "amung", "analagous",
    "analitic", "anarchim", "ancestory", "androgenous", "anihilation",
    "aniversary", "annoint", "annouce", "annualy", "anomolous",
    "anouncement", "ansalisation", "antartic", "anual", "anwsered",
    "apparant", "apparantly", "appart", "appearence", "appreceiated",
    "apprearance", "approachs", "appropiate", "approriate", "approxiamtely",
    "aproximately", "aquaintance", "aquainted", "aquire", "aquisition",
    "arbitary", "archaelogy", "archetect", "architechture", "arguement",
    "argumentitive", "arised", "arival", "arogant", "arrangment", "artical",
    "articel", "artifical", "assasination", "assesment", "assistent",
    "assocation", "assoicate", "asssassans", "assympotic", "asteriod",
    "atheistic", "athiest", "attemps", "attendence", "attened", "attension",
    "attitide", "attrocities", "audeince", "austrailia", "authenticy",
    "authrorities", "automaticly", "autority", "avaliable", "avalable",
    "aproach", "becuase", "begining", "beleive", "belive", "benifit",
    "betwen", "bigining", "bizzare", "bouyancy", "briliant", "brocolli",
    "buisness", "calender", "camoflage", "catagory", "cemetary", "changable",
    "charachter", "charecter", "chauffer", "cheif", "childen", "choosen",
    "cieling", "circut", "collegue", "comming", "commitee", "committment",
    "compatiblity", "competetive", "completly", "concensus", "concious",
    "condidtion", "conected", "conciousness", "consonent", "contruction",
    "controll", "convienient", "copywrite", "correspondance", "critized",
    "curiousity", "definately", "definatly", "definitly", "delerious",
    "desciption", "desgined", "determin", "developement", "diferent",
    "dificult", "dissapear", "dissapoint", "dosent", "driveing", "duting",
    "ecstacy", "efficent", "embarass", "enviroment", "equiped", "excede",
    "exellent", "exerpt", "existance", "experiance", "explaination",
    "familar", "feild", "finaly", "flourescent", "foriegn", "fourty",
    "freind", "fullfill", "futher", "gaurd", "goverment", "grammer",
    "gratefull", "guage", "happend", "harrass", "heigth", "heirarchy",
    "humourous", "hygene", "hypocrit", "idiosyncracy", "ignorence",
    "imediately", "immediatly"
};

inline constexpr const char kSpecialChars[] = "@#$%^&*-_=+><[]{}/\\|~";

inline constexpr const char kPunctuation[] = ".,?!:;'\"()";

}  // namespace dehealth::lexicons
