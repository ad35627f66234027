using UnityEngine;
using UnityEngine.UI;

public class UIManager : MonoBehaviour
{
    public static UIManager Instance { get; private set; }

    public Text scoreText;
    public Text messageText;
    public string scorePrefix = "Score: ";

    private void Awake()
    {
        Instance = this;
    }

    public void SetScore(int score)
    {
        if (scoreText != null)
        {
            scoreText.text = scorePrefix + score;
        }
    }

    public void ShowMessage(string message)
    {
        if (messageText != null)
        {
            messageText.text = message;
        }
    }
}
