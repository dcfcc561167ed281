#include "test_support.hpp"

#include "json.hpp"

#include "harvest/gzip.hpp"
#include "harvest/unicode.hpp"

namespace testsup {
namespace {

// Content blocks long enough (> 200 code points) and function-word-dense
// enough to classify as good at the default parameters; everything around
// them (nav, short promos, © footer) classifies bad.

const std::string kTitleA = "Veðrið og dagarnir á ströndinni";
const std::vector<std::string> kParasA = {
    "Það er ekki alltaf svo að við vitum hvað er best fyrir okkur og því er gott að "
    "staldra við og hugsa um það sem skiptir máli áður en við tökum ákvörðun sem er "
    "stór og hefur áhrif á fólkið sem er í kringum okkur á hverjum degi.",
    "Um morguninn var veðrið svo gott að við fórum öll út á ströndina og sátum þar í "
    "sandinum með kaffið okkar og horfðum á bátana sem voru að koma inn í höfnina "
    "einn af öðrum eins og þeir hefðu aldrei verið annars staðar og það var eins og "
    "tíminn stæði í stað.",
    "Þegar kvöldið kom og sólin fór niður fyrir fjallið þá var eins og allt yrði "
    "hljótt og við sátum áfram og töluðum um það sem hafði gerst um daginn og um það "
    "sem við ætluðum að gera á morgun og svo gengum við heim í rólegheitum eftir "
    "veginum sem liggur meðfram sjónum."};

const std::string kTitleB = "Sagan af bátnum sem kom aldrei aftur";
const std::vector<std::string> kParasB = {
    "Hann sagði okkur að báturinn hefði farið út um nóttina og að enginn hefði séð "
    "hann eftir það og því hefðu allir í þorpinu farið niður á bryggjuna um morguninn "
    "til að horfa út á hafið og bíða eftir því að eitthvað sæist sem gæti sagt þeim "
    "hvað hefði gerst.",
    "Konurnar stóðu saman í hóp og töluðu lágt um það sem allir voru að hugsa en "
    "enginn vildi segja upphátt og börnin hlupu um á milli og skildu ekki af hverju "
    "enginn vildi leika við þau þennan morgun sem var svo bjartur og fallegur eins og "
    "ekkert hefði í skorist.",
    "Svo þegar leið á daginn kom gamli maðurinn sem allir þekktu niður á bryggjuna og "
    "sagði með rólegri röddu að hafið gæfi og hafið tæki og að það eina sem fólkið "
    "gæti gert væri að halda áfram að lifa og vona að báturinn kæmi aftur með "
    "flóðinu um kvöldið."};

const std::string kTitleC = "Fréttir af fjallinu og fólkinu í dalnum";
const std::vector<std::string> kParasC = {
    "Í dalnum undir fjallinu býr fólk sem hefur verið þar í margar kynslóðir og það "
    "þekkir hverja þúfu og hvern stein og veit hvar áin rennur á vorin og hvar "
    "snjórinn liggur lengst fram eftir sumri og hvernig veðrið verður á morgun bara "
    "með því að horfa á skýin.",
    "Á veturna þegar vegurinn yfir heiðina lokast þá verður dalurinn eins og heimur "
    "út af fyrir sig og fólkið hittist oftar og spilar og les og segir sögur af því "
    "sem gerðist í gamla daga og börnin sitja hjá og hlusta þó að þau þekki allar "
    "sögurnar nú þegar utan að.",
    "Svo kemur vorið og áin vex og fuglarnir koma aftur einn af öðrum og þá er eins "
    "og allt byrji upp á nýtt og fólkið fer út á túnin og upp í fjallið og niður að "
    "sjónum og allir hafa nóg að gera fram á haust þegar hringurinn lokast enn einu "
    "sinni eins og alltaf."};

// Site-wide footer carried by pages B and C; window dedup must keep it only
// in B, the first of the two in canonical order.
const std::vector<std::string> kFooter = {
    "Um vefinn og um okkur sem skrifum hér er það að segja að við erum lítill hópur "
    "sem hefur áhuga á því sem gerist í bænum okkar og við reynum að segja frá því "
    "sem skiptir máli fyrir fólkið sem býr hér og fyrir þau sem eru flutt í burtu en "
    "vilja fylgjast með.",
    "Efni af þessum vef má ekki nota annars staðar nema að fá leyfi frá okkur fyrst "
    "og við biðjum um að heimilda sé getið þegar vitnað er í það sem hér stendur því "
    "að á bak við hvern texta er vinna sem einhver hefur lagt á sig án þess að fá "
    "nokkuð fyrir það.",
    "Ef þú vilt senda okkur línu þá er best að nota netfangið sem er neðst á síðunni "
    "og við svörum eins fljótt og við getum en það getur tekið nokkra daga þegar "
    "mikið er um að vera hjá okkur eins og til dæmis á sumrin þegar allir eru í fríi "
    "einhvers staðar."};

struct EnPage {
    std::string title;
    std::vector<std::string> paras;
};

const std::vector<EnPage> kEnglishPages = {
    {"A quiet morning by the harbour",
     {"It was early in the morning and the town was still asleep when we walked down "
      "to the harbour and sat on the old bench by the water and watched the boats as "
      "they moved slowly on their ropes and we said nothing because there was nothing "
      "that needed to be said.",
      "Later when the sun was up and the shops were open we bought bread and coffee "
      "and took it back to the bench and the gulls came at once as they always do and "
      "we laughed at them and gave them a little of the bread even though the sign "
      "says that you should not."}},
    {"Notes on the weather in the north",
     {"The weather in the north of the island changes so fast that you can see all "
      "four seasons in one afternoon and the people who live there say that if you do "
      "not like the weather you only have to wait for a quarter of an hour and it "
      "will be something else entirely.",
      "We drove over the pass in bright sunshine and came down the other side into "
      "fog so thick that we could not see the road and then the fog lifted as "
      "suddenly as it had come and there was the sea below us shining like a sheet "
      "of metal all the way to the horizon."}},
    {"The bookshop at the end of the street",
     {"There is a small bookshop at the end of the street where the owner knows every "
      "book on every shelf and if you tell him what you read last he will walk along "
      "the shelves and pull out three books and one of them will be exactly the book "
      "that you did not know you were looking for.",
      "In the winter the shop is open only in the afternoon but there is always "
      "coffee on the stove and a chair by the window and nobody minds if you sit for "
      "an hour with a book that you have not paid for because the owner says that "
      "books are patient and so is he."}},
    {"A walk across the old bridge",
     {"We crossed the old bridge on foot because the guide had said that it was the "
      "best way to see the river and she was right as the water below us was green "
      "and clear and we could see the fish standing still in the current like small "
      "grey shadows over the stones.",
      "On the far side there was a path along the bank with benches every few "
      "hundred metres and old men sat on them with their dogs and greeted us as we "
      "passed and by the time we reached the mill at the end of the path we had said "
      "good morning more times than in the whole year before."}}};

std::string nav_block(bool english) {
    if (english) {
        return "<div class=\"nav\"><a href=\"/\">Home</a> <a href=\"/news\">News</a> "
               "<a href=\"/about\">About</a></div>";
    }
    return "<div class=\"nav\"><a href=\"/\">Forsíða</a> <a href=\"/frettir\">Fréttir</a> "
           "<a href=\"/um\">Um vefinn</a></div>";
}

std::string copyright_block() {
    return "<div class=\"footer\">© 2020 Vefurinn okkar. Allur réttur áskilinn.</div>";
}

std::string make_page(const std::string& title, const std::vector<std::string>& paras,
                      bool with_footer, bool english, const std::string& charset) {
    std::string html = "<html><head><meta charset=\"" + charset + "\"><title>" + title +
                       "</title></head><body>";
    html += nav_block(english);
    html += "<h1>" + title + "</h1>";
    for (const auto& para : paras) html += "<p>" + para + "</p>";
    if (with_footer) {
        html += "<div class=\"site-footer\">";
        for (const auto& line : kFooter) html += "<p>" + line + "</p>";
        html += "</div>";
    }
    html += copyright_block();
    html += "</body></html>";
    return html;
}

std::string all_boilerplate_page() {
    std::string html =
        "<html><head><meta charset=\"utf-8\"><title>Tilboð vikunnar</title></head><body>";
    html += nav_block(false);
    html += "<h1>Tilboð vikunnar</h1>";
    html += "<p>Opið alla daga frá tíu til sex.</p>";
    html += "<p>Sendu okkur póst á netfangið okkar.</p>";
    html += "<ul><li><a href=\"/a\">Vörur</a></li><li><a href=\"/b\">Þjónusta</a></li>"
            "<li><a href=\"/c\">Afslættir</a></li></ul>";
    html += copyright_block();
    html += "</body></html>";
    return html;
}

std::string utf8_to_latin1(std::string_view s) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        char32_t cp = harvest::uni::decode(s, i);
        out += static_cast<char>(cp);  // fixture text stays within Latin-1
    }
    return out;
}

std::string chunked(const std::string& body) {
    // Two chunks so the decoder walks a chain, then the terminator.
    std::size_t half = body.size() / 2;
    auto chunk = [](std::string_view part) {
        char size_hex[16];
        std::snprintf(size_hex, sizeof(size_hex), "%zx", part.size());
        return std::string(size_hex) + "\r\n" + std::string(part) + "\r\n";
    };
    return chunk(std::string_view(body).substr(0, half)) +
           chunk(std::string_view(body).substr(half)) + "0\r\n\r\n";
}

enum class Coding { plain, chunked_coding, gzip_coding };

std::string http_response(const std::string& body, const std::string& content_type,
                          Coding coding) {
    std::string head = "HTTP/1.1 200 OK\r\nContent-Type: " + content_type + "\r\n";
    std::string payload;
    switch (coding) {
        case Coding::plain:
            payload = body;
            head += "Content-Length: " + std::to_string(payload.size()) + "\r\n";
            break;
        case Coding::chunked_coding:
            payload = chunked(body);
            head += "Transfer-Encoding: chunked\r\n";
            break;
        case Coding::gzip_coding:
            payload = harvest::gzip_compress(body);
            head += "Content-Encoding: gzip\r\nContent-Length: " +
                    std::to_string(payload.size()) + "\r\n";
            break;
    }
    return head + "\r\n" + payload;
}

}  // namespace

std::string fixture_stopwords_text() {
    static const std::vector<std::string> words = {
        // Icelandic function words
        "og", "að", "af", "á", "í", "er", "það", "sem", "ekki", "við", "um", "en",
        "til", "með", "fyrir", "eða", "svo", "þá", "þó", "nú", "hér", "þar", "hann",
        "hún", "þetta", "ég", "þú", "okkur", "sig", "hefur", "hafa", "var", "vera",
        "verið", "eru", "því", "yfir", "undir", "eftir", "milli", "frá", "upp",
        "niður", "inn", "út", "alltaf", "aldrei", "eins", "þegar", "hvað", "hvar",
        "allir", "öll", "þau", "þeir", "sé", "má", "best",
        // English function words
        "the", "and", "is", "of", "to", "that", "it", "we", "you", "are", "not",
        "for", "on", "with", "as", "this", "but", "be", "have", "all", "was",
        "were", "they", "their", "our", "in", "at", "by", "or", "an", "a", "so",
        "if", "when", "then", "there", "here", "now", "what", "who", "do", "he",
        "she", "him", "her", "us", "them", "had", "will", "can", "could", "would",
        "should", "only", "even", "because"};
    std::string text;
    for (const auto& word : words) {
        text += word;
        text += "\n";
    }
    return text;
}

FixtureStore build_fixture_store() {
    FixtureStore store;
    store.footer_lines = kFooter;

    struct Raw {
        std::string url, timestamp, digest, mime, status;
        std::string record_bytes;  // serialized WARC record, pre-compression
        bool corrupt_member = false;
    };
    std::vector<Raw> raws;

    auto response_record = [](const std::string& url, const std::string& date,
                              const std::string& http) {
        return harvest::serialize_warc(harvest::make_warc_record(
            "response",
            {{"WARC-Record-ID", "<urn:fixture:" + url + ">"},
             {"WARC-Target-URI", url},
             {"WARC-Date", date},
             {"Content-Type", "application/http; msgtype=response"}},
            http));
    };

    const std::string html_a = make_page(kTitleA, kParasA, false, false, "utf-8");
    const std::string html_b = make_page(kTitleB, kParasB, true, false, "utf-8");
    const std::string html_c = make_page(kTitleC, kParasC, true, false, "iso-8859-1");

    // 0: page A, plain UTF-8.
    raws.push_back({"https://example.is/vedur", "20200131010101", "FIXDIGESTA",
                    "text/html", "200",
                    response_record("https://example.is/vedur", "2020-01-31T01:01:01Z",
                                    http_response(html_a, "text/html; charset=utf-8",
                                                  Coding::plain))});
    // 1: page A', identical content at another URL; same content digest.
    raws.push_back({"https://spegill.example.is/vedur", "20200201020202", "FIXDIGESTA",
                    "text/html", "200",
                    response_record("https://spegill.example.is/vedur",
                                    "2020-02-01T02:02:02Z",
                                    http_response(html_a, "text/html; charset=utf-8",
                                                  Coding::plain))});
    // 2: page B, charset only in the meta tag.
    raws.push_back({"https://example.is/batur", "20200201030303", "FIXDIGESTB",
                    "text/html", "200",
                    response_record("https://example.is/batur", "2020-02-01T03:03:03Z",
                                    http_response(html_b, "text/html", Coding::plain))});
    // 3: page C, Latin-1 body declared in the HTTP header.
    raws.push_back(
        {"https://example.is/dalur", "20200202040404", "FIXDIGESTC", "text/html", "200",
         response_record("https://example.is/dalur", "2020-02-02T04:04:04Z",
                         http_response(utf8_to_latin1(html_c),
                                       "text/html; charset=iso-8859-1", Coding::plain))});
    // 4: page E, nothing but boilerplate.
    raws.push_back({"https://example.is/tilbod", "20200202050505", "FIXDIGESTE",
                    "text/html", "200",
                    response_record("https://example.is/tilbod", "2020-02-02T05:05:05Z",
                                    http_response(all_boilerplate_page(),
                                                  "text/html; charset=utf-8",
                                                  Coding::plain))});
    // 5-8: English pages; one chunked, one gzip content-coded.
    for (std::size_t i = 0; i < kEnglishPages.size(); ++i) {
        const auto& page = kEnglishPages[i];
        Coding coding = i == 1 ? Coding::chunked_coding
                               : (i == 2 ? Coding::gzip_coding : Coding::plain);
        std::string url = "https://ensk.example.is/grein" + std::to_string(i + 1);
        std::string ts = "2020020306060" + std::to_string(i);
        raws.push_back(
            {url, ts, "FIXDIGESTEN" + std::to_string(i + 1), "text/html", "200",
             response_record(url, "2020-02-03T06:06:0" + std::to_string(i) + "Z",
                             http_response(make_page(page.title, page.paras, false,
                                                     true, "utf-8"),
                                           "text/html; charset=utf-8", coding))});
    }
    // 9: request record.
    raws.push_back({"https://example.is/vedur", "20200203070707", "FIXDIGESTREQ",
                    "application/http", "200",
                    harvest::serialize_warc(harvest::make_warc_record(
                        "request",
                        {{"WARC-Record-ID", "<urn:fixture:request>"},
                         {"WARC-Target-URI", "https://example.is/vedur"},
                         {"Content-Type", "application/http; msgtype=request"}},
                        "GET /vedur HTTP/1.1\r\nHost: example.is\r\n\r\n"))});
    // 10: metadata record.
    raws.push_back({"https://example.is/batur", "20200203080808", "FIXDIGESTMETA",
                    "application/warc-fields", "200",
                    harvest::serialize_warc(harvest::make_warc_record(
                        "metadata",
                        {{"WARC-Record-ID", "<urn:fixture:metadata>"},
                         {"WARC-Target-URI", "https://example.is/batur"}},
                        "fetchTimeMs: 120\r\n"))});
    // 11: response whose gzip member is damaged.
    raws.push_back({"https://example.is/brotinn", "20200203090909", "FIXDIGESTBAD",
                    "text/html", "200",
                    response_record("https://example.is/brotinn", "2020-02-03T09:09:09Z",
                                    http_response(html_a, "text/html; charset=utf-8",
                                                  Coding::plain)),
                    true});

    for (const auto& raw : raws) {
        std::string member = harvest::gzip_compress(raw.record_bytes);
        if (raw.corrupt_member) {
            // Damage the deflate stream and the trailer; decompression must fail.
            for (std::size_t i = member.size() / 2; i < member.size() / 2 + 4; ++i) {
                member[i] = static_cast<char>(member[i] ^ 0x5a);
            }
            member[member.size() - 1] = static_cast<char>(member[member.size() - 1] ^ 0xff);
        }
        harvest::IndexEntry entry;
        entry.urlkey = raw.url;
        entry.timestamp = raw.timestamp;
        entry.url = raw.url;
        entry.mime = raw.mime;
        entry.status = raw.status;
        entry.digest = raw.digest;
        entry.filename = store.dump_filename;
        entry.offset = store.dump_bytes.size();
        entry.length = member.size();
        store.dump_bytes += member;
        store.entries.push_back(entry);

        nlohmann::json line{{"urlkey", entry.urlkey},
                            {"timestamp", entry.timestamp},
                            {"url", entry.url},
                            {"mime", entry.mime},
                            {"status", entry.status},
                            {"digest", entry.digest},
                            // offset/length as strings, as the live index serves them
                            {"offset", std::to_string(entry.offset)},
                            {"length", std::to_string(entry.length)},
                            {"filename", entry.filename}};
        store.cdx_lines.push_back(line.dump());
    }

    auto expected = [&](std::size_t record, const std::string& title,
                        const std::vector<std::string>& paras, bool with_footer) {
        harvest::Document doc;
        const auto& entry = store.entries[record];
        doc.id = harvest::Document::make_id(entry.digest, entry.timestamp, entry.url);
        doc.url = entry.url;
        doc.timestamp = entry.timestamp;
        doc.lines.push_back(title);
        for (const auto& para : paras) doc.lines.push_back(para);
        if (with_footer) {
            for (const auto& line : kFooter) doc.lines.push_back(line);
        }
        return doc;
    };
    store.expected_docs.push_back(expected(0, kTitleA, kParasA, false));
    store.expected_docs.push_back(expected(2, kTitleB, kParasB, true));
    store.expected_docs.push_back(expected(3, kTitleC, kParasC, false));
    return store;
}

}  // namespace testsup
